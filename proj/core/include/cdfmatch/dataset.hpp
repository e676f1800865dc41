#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cdfmatch/loss.hpp"
#include "cdfmatch/rng.hpp"
#include "cdfmatch/types.hpp"

namespace cdfmatch {

struct LabeledDataset {
  Matrix features;
  Vector labels;  // 0/1
  std::vector<std::string> feature_names;

  Eigen::Index rows() const { return features.rows(); }
  Eigen::Index cols() const { return features.cols(); }
  ClassificationData as_classification() const { return {features, labels}; }
};

inline constexpr int kIonosphereFeatures = 34;

/// Ionosphere CSV: 34 numeric columns followed by 'g' (1) or 'b' (0).
/// Throws std::runtime_error naming the offending line.
LabeledDataset load_ionosphere(const std::string& path);
LabeledDataset parse_ionosphere(std::istream& is);

struct SplitSpec {
  double train_fraction = 0.5;
  bool stratified = true;
  std::uint64_t seed = 0;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// round(N f) training rows; stratified mode allocates each class by largest
/// remainder so that the total still matches. Indices are ascending.
SplitIndices split_indices(const Vector& labels, const SplitSpec& spec);

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& data, const SplitSpec& spec);

LabeledDataset take_rows(const LabeledDataset& data, const std::vector<std::size_t>& rows);

}  // namespace cdfmatch

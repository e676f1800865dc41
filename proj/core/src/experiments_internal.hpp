#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cdfmatch/experiments.hpp"
#include "cdfmatch/svm.hpp"

namespace cdfmatch::detail {

struct RegressionRegime {
  std::string name;
  HyperParams theta;
  SvrModel model;
  std::optional<OptResult> history;
};

/// Trains baseline, error-only tuned and distribution-matching tuned SVR
/// models on the same rows, frozen inputs and optimizer stream.
std::vector<RegressionRegime> run_regression_regimes(const RegressionData& train,
                                                     const EmpiricalCdf& target,
                                                     const Matrix& frozen_inputs,
                                                     const TuningSettings& tuning, RngStream hpo_rng);

/// best_so_far monotone, best_loss = min total, budget and bounds respected.
bool history_consistent(const OptResult& result, const SearchSpace& space, std::size_t budget);

void ensure_directory(const std::string& dir);
std::string join_path(const std::string& dir, const std::string& file);

std::span<const double> as_span(const Vector& v);

/// Distances of `predicted` to `target` under every kind, for reporting.
nlohmann::json distance_table(const EmpiricalCdf& target, const EmpiricalCdf& predicted,
                              std::size_t grid_size);

}  // namespace cdfmatch::detail

#pragma once

#include <nlohmann/json_fwd.hpp>

#include "cdfmatch/types.hpp"

namespace cdfmatch {

/// Per-feature z-scoring plus target z-scoring.
///
/// Features with zero spread map to 0. A constant target keeps a unit scale
/// so that de-standardization stays well defined.
class Standardizer {
 public:
  Standardizer() = default;

  static Standardizer fit(const Matrix& X, const Vector& y);
  /// Features only; the target transform is the identity.
  static Standardizer fit_features(const Matrix& X);

  Matrix transform(const Matrix& X) const;
  Vector transform_target(const Vector& y) const;
  Vector inverse_target(const Vector& z) const;
  double inverse_target(double z) const { return target_mean_ + target_scale() * z; }
  /// Multiplier from standardized to original target units.
  double target_scale() const { return target_sd_ > 0.0 ? target_sd_ : 1.0; }

  const Vector& feature_mean() const { return feature_mean_; }
  const Vector& feature_sd() const { return feature_sd_; }
  double target_mean() const { return target_mean_; }
  double target_sd() const { return target_sd_; }
  Eigen::Index dimension() const { return feature_mean_.size(); }

  friend void to_json(nlohmann::json& j, const Standardizer& s);
  friend void from_json(const nlohmann::json& j, Standardizer& s);

 private:
  Vector feature_mean_;
  Vector feature_sd_;
  double target_mean_ = 0.0;
  double target_sd_ = 1.0;
};

}  // namespace cdfmatch

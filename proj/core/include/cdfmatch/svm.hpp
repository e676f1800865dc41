#pragma once

#include <cstddef>

#include <nlohmann/json_fwd.hpp>

#include "cdfmatch/kernel.hpp"
#include "cdfmatch/standardizer.hpp"
#include "cdfmatch/types.hpp"

namespace cdfmatch {

struct TrainOptions {
  double tol = 1e-3;
  std::size_t max_iter = 100000;
};

/// Dual-form predictor shared by regression and classification models.
///
/// Support vectors are stored in standardized feature space; `predict_raw`
/// returns sum_i coef_i k(sv_i, x) + bias on that scale.
struct KernelExpansion {
  HyperParams hyperparams;
  Standardizer standardizer;
  Matrix support_vectors;
  Vector coefficients;
  double bias = 0.0;
  bool converged = true;
  std::size_t iterations = 0;

  Eigen::Index dimension() const { return standardizer.dimension(); }
  /// Raw expansion value for standardized inputs.
  Vector expansion(const Matrix& standardized) const;
};

/// epsilon-insensitive support vector regressor.
struct SvrModel : KernelExpansion {
  /// Predictions in original target units. Rows are independent, so any
  /// batching yields bit-identical values.
  Vector predict(const Matrix& X) const;
};

/// Soft-margin binary classifier with labels -1/+1.
struct SvcModel : KernelExpansion {
  Vector decision(const Matrix& X) const;
  /// sign(decision) with ties resolved to +1.
  Vector predict(const Matrix& X) const;
};

/// Trains on standardized data. Throws std::invalid_argument for fewer than
/// two rows, shape mismatch, or non-finite inputs. Hitting max_iter returns
/// the last iterate with `converged == false`.
SvrModel svr_train(const Matrix& X, const Vector& y, const HyperParams& h,
                   const TrainOptions& options = {});

/// `labels` must be -1/+1 with both classes present ("degenerate labels" otherwise).
SvcModel svc_train(const Matrix& X, const Vector& labels, const HyperParams& h,
                   const TrainOptions& options = {});

/// Maps {0,1} labels to {-1,+1}.
Vector to_signed_labels(const Vector& labels01);

void to_json(nlohmann::json& j, const SvrModel& m);
void from_json(const nlohmann::json& j, SvrModel& m);
void to_json(nlohmann::json& j, const SvcModel& m);
void from_json(const nlohmann::json& j, SvcModel& m);

}  // namespace cdfmatch

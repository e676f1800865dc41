#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cdfmatch/cdf_distance.hpp"
#include "cdfmatch/distributions.hpp"
#include "cdfmatch/ecdf.hpp"
#include "cdfmatch/rng.hpp"
#include "cdfmatch/svm.hpp"

namespace cdfmatch {

/// Weights of the data, distribution and physics terms.
struct LossWeights {
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.0;

  void validate() const;
};

struct LossBreakdown {
  double data_loss = 0.0;
  double prob_loss = 0.0;
  double physics_loss = 0.0;
  double total = 0.0;
  double rmse = 0.0;
};

/// total = alpha * data + beta * prob + gamma * physics.
LossBreakdown combine(const LossWeights& w, double data_loss, double prob_loss,
                      double physics_loss = 0.0);

/// Residual of a physical law for one sample: R(y_hat, x).
using Residual = std::function<std::vector<double>(double prediction, std::span<const double> x)>;

struct RegressionData {
  Matrix X;
  Vector y;
};

/// Binary labels stored as 0/1.
struct ClassificationData {
  Matrix X;
  Vector labels;
};

/// How a classifier's outputs enter the distribution term.
enum class ClassifierCdf { labels, margins };

struct ObjectiveConfig {
  LossWeights weights;
  DistanceKind distance = DistanceKind::bhattacharyya;
  DensityMode density_mode = DensityMode::masses;
  std::size_t mc_samples = 10000;
  std::size_t grid_size = 100;
  EmpiricalCdf target_cdf;
  InputDistribution input_dist;
  std::optional<Residual> residual;
  /// Common random numbers: when set, every evaluation reuses these rows.
  std::optional<Matrix> frozen_mc_inputs;
  /// When set, the data term is measured here instead of on the training set.
  std::optional<RegressionData> holdout;
  Interpolation predicted_interpolation = Interpolation::linear;
  ClassifierCdf classifier_cdf = ClassifierCdf::labels;
  TrainOptions train;
  std::size_t workers = 1;

  void validate() const;
};

/// Mean squared error.
double data_loss(std::span<const double> y_true, std::span<const double> y_pred);

/// Mean squared residual norm; 0 when no residual is supplied.
double physics_loss(const std::optional<Residual>& residual, const Matrix& X,
                    std::span<const double> y_pred);

/// Regression objective plus the artifacts that produced it.
struct RegressionEvaluation {
  LossBreakdown breakdown;
  SvrModel model;
  EmpiricalCdf predicted_cdf;
};

struct ClassificationEvaluation {
  LossBreakdown breakdown;
  SvcModel model;
  EmpiricalCdf predicted_cdf;
  EmpiricalCdf target_cdf;
};

/// Rows the distribution term is evaluated on: the frozen set, or a fresh draw from `rng`.
Matrix objective_inputs(const ObjectiveConfig& cfg, RngStream rng);

RegressionEvaluation evaluate_objective_detailed(const HyperParams& theta,
                                                 const RegressionData& train,
                                                 const ObjectiveConfig& cfg, RngStream rng);

inline LossBreakdown evaluate_objective(const HyperParams& theta, const RegressionData& train,
                                        const ObjectiveConfig& cfg, RngStream rng) {
  return evaluate_objective_detailed(theta, train, cfg, rng).breakdown;
}

/// Data-only objective: trains and reports the training MSE, nothing else.
LossBreakdown evaluate_data_only(const HyperParams& theta, const RegressionData& train,
                                 const TrainOptions& options = {});

ClassificationEvaluation evaluate_objective_classification_detailed(
    const HyperParams& theta, const ClassificationData& train, const ObjectiveConfig& cfg,
    RngStream rng);

inline LossBreakdown evaluate_objective_classification(const HyperParams& theta,
                                                       const ClassificationData& train,
                                                       const ObjectiveConfig& cfg,
                                                       RngStream rng) {
  return evaluate_objective_classification_detailed(theta, train, cfg, rng).breakdown;
}

/// Empirical CDF of 0/1 labels (step mode).
EmpiricalCdf label_cdf(const Vector& labels01);

void to_json(nlohmann::json& j, const LossWeights& w);
void from_json(const nlohmann::json& j, LossWeights& w);
void to_json(nlohmann::json& j, const LossBreakdown& b);

}  // namespace cdfmatch

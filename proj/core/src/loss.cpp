#include "cdfmatch/loss.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace cdfmatch {

void LossWeights::validate() const {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !(gamma >= 0.0))
    throw std::invalid_argument("loss weights must be non-negative");
  if (!(alpha + beta > 0.0)) throw std::invalid_argument("alpha + beta must be positive");
}

LossBreakdown combine(const LossWeights& w, double data, double prob, double physics) {
  LossBreakdown b;
  b.data_loss = data;
  b.prob_loss = prob;
  b.physics_loss = physics;
  b.total = w.alpha * data + w.beta * prob + w.gamma * physics;
  b.rmse = std::sqrt(data);
  return b;
}

void ObjectiveConfig::validate() const {
  weights.validate();
  if (mc_samples < 100) throw std::invalid_argument("mc_samples must be at least 100");
  if (grid_size < 2) throw std::invalid_argument("grid_size must be at least 2");
  if (target_cdf.empty()) throw std::invalid_argument("objective has no target CDF");
  if (frozen_mc_inputs) {
    if (static_cast<std::size_t>(frozen_mc_inputs->rows()) != mc_samples)
      throw std::invalid_argument("frozen Monte Carlo inputs must have mc_samples rows");
  } else {
    input_dist.validate();
  }
}

double data_loss(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("data loss: length mismatch");
  if (y_true.empty()) throw std::invalid_argument("data loss: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double r = y_true[i] - y_pred[i];
    sum += r * r;
  }
  return sum / static_cast<double>(y_true.size());
}

double physics_loss(const std::optional<Residual>& residual, const Matrix& X,
                    std::span<const double> y_pred) {
  if (!residual) return 0.0;
  if (static_cast<std::size_t>(X.rows()) != y_pred.size())
    throw std::invalid_argument("physics loss: length mismatch");
  if (y_pred.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < y_pred.size(); ++i) {
    const auto row = X.row(static_cast<Eigen::Index>(i));
    const auto r = (*residual)(y_pred[i], std::span<const double>(row.data(), static_cast<std::size_t>(row.size())));
    for (double v : r) {
      if (!std::isfinite(v)) throw std::runtime_error("physics residual is not finite");
      sum += v * v;
    }
  }
  return sum / static_cast<double>(y_pred.size());
}

Matrix objective_inputs(const ObjectiveConfig& cfg, RngStream rng) {
  if (cfg.frozen_mc_inputs) return *cfg.frozen_mc_inputs;
  return sample(cfg.input_dist, cfg.mc_samples, rng);
}

namespace {

std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

Vector predictions_on(const BatchPredictor& predict, const ObjectiveConfig& cfg, RngStream rng) {
  Vector out;
  if (cfg.frozen_mc_inputs) {
    out = predict_in_chunks(predict, *cfg.frozen_mc_inputs, cfg.workers);
  } else {
    out = predict_in_chunks(predict, sample(cfg.input_dist, cfg.mc_samples, rng), cfg.workers);
  }
  std::size_t bad = 0;
  for (Eigen::Index i = 0; i < out.size(); ++i)
    if (!std::isfinite(out[i])) ++bad;
  if (bad > 0) throw std::runtime_error("model produced " + std::to_string(bad) + " non-finite outputs");
  return out;
}

}  // namespace

RegressionEvaluation evaluate_objective_detailed(const HyperParams& theta, const RegressionData& train,
                                                 const ObjectiveConfig& cfg, RngStream rng) {
  cfg.validate();
  if (train.X.rows() == 0) throw std::invalid_argument("empty training set");

  RegressionEvaluation out;
  out.model = svr_train(train.X, train.y, theta, cfg.train);
  const Vector fit = out.model.predict(train.X);
  double data = 0.0;
  if (cfg.holdout) {
    const Vector held = out.model.predict(cfg.holdout->X);
    data = data_loss(as_span(cfg.holdout->y), as_span(held));
  } else {
    data = data_loss(as_span(train.y), as_span(fit));
  }
  const double physics = physics_loss(cfg.residual, train.X, as_span(fit));

  const SvrModel& model = out.model;
  const Vector predicted = predictions_on([&model](const Matrix& X) { return model.predict(X); }, cfg, rng);
  out.predicted_cdf = ecdf_build(as_span(predicted), cfg.predicted_interpolation);
  const ThresholdGrid grid = make_grid(cfg.target_cdf, out.predicted_cdf, cfg.grid_size);
  const double prob = distance(cfg.distance, cfg.target_cdf, out.predicted_cdf, grid, cfg.density_mode);

  out.breakdown = combine(cfg.weights, data, prob, physics);
  return out;
}

LossBreakdown evaluate_data_only(const HyperParams& theta, const RegressionData& train,
                                 const TrainOptions& options) {
  const SvrModel model = svr_train(train.X, train.y, theta, options);
  const Vector fit = model.predict(train.X);
  return combine(LossWeights{1.0, 0.0, 0.0}, data_loss(as_span(train.y), as_span(fit)), 0.0);
}

EmpiricalCdf label_cdf(const Vector& labels01) {
  return ecdf_build(as_span(labels01), Interpolation::step);
}

ClassificationEvaluation evaluate_objective_classification_detailed(
    const HyperParams& theta, const ClassificationData& train, const ObjectiveConfig& cfg,
    RngStream rng) {
  cfg.weights.validate();
  if (cfg.grid_size < 2) throw std::invalid_argument("grid_size must be at least 2");
  if (train.X.rows() == 0) throw std::invalid_argument("empty training set");

  const Vector signed_labels = to_signed_labels(train.labels);
  ClassificationEvaluation out;
  out.model = svc_train(train.X, signed_labels, theta, cfg.train);

  const Vector fit = out.model.predict(train.X);
  std::size_t wrong = 0;
  for (Eigen::Index i = 0; i < fit.size(); ++i)
    if (fit[i] != signed_labels[i]) ++wrong;
  const double error_rate = static_cast<double>(wrong) / static_cast<double>(fit.size());

  const SvcModel& model = out.model;
  if (cfg.classifier_cdf == ClassifierCdf::labels) {
    Vector predicted = predictions_on([&model](const Matrix& X) { return model.predict(X); }, cfg, rng);
    for (Eigen::Index i = 0; i < predicted.size(); ++i) predicted[i] = predicted[i] > 0.0 ? 1.0 : 0.0;
    out.predicted_cdf = label_cdf(predicted);
    out.target_cdf = label_cdf(train.labels);
  } else {
    const Vector margins = predictions_on([&model](const Matrix& X) { return model.decision(X); }, cfg, rng);
    out.predicted_cdf = ecdf_build(as_span(margins), cfg.predicted_interpolation);
    out.target_cdf = ecdf_build(as_span(signed_labels), Interpolation::step);
  }
  const ThresholdGrid grid = make_grid(out.target_cdf, out.predicted_cdf, cfg.grid_size);
  const double prob = distance(cfg.distance, out.target_cdf, out.predicted_cdf, grid, cfg.density_mode);
  out.breakdown = combine(cfg.weights, error_rate, prob, 0.0);
  return out;
}

void to_json(nlohmann::json& j, const LossWeights& w) {
  j = {{"alpha", w.alpha}, {"beta", w.beta}, {"gamma", w.gamma}};
}

void from_json(const nlohmann::json& j, LossWeights& w) {
  w.alpha = j.value("alpha", w.alpha);
  w.beta = j.value("beta", w.beta);
  w.gamma = j.value("gamma", w.gamma);
}

void to_json(nlohmann::json& j, const LossBreakdown& b) {
  j = {{"data_loss", b.data_loss},
       {"prob_loss", b.prob_loss},
       {"physics_loss", b.physics_loss},
       {"total", b.total},
       {"rmse", b.rmse}};
}

}  // namespace cdfmatch

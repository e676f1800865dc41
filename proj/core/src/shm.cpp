#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cdfmatch/experiments.hpp"
#include "cdfmatch/metrics.hpp"
#include "experiments_internal.hpp"

namespace cdfmatch {

InputDistribution ShmConfig::input_distribution() const {
  std::vector<Marginal> m;
  for (const auto& r : ranges) m.push_back(Marginal::uniform(r.lower, r.upper));
  return InputDistribution(std::move(m));
}

void ShmConfig::validate() const {
  if (n_samples < 2) throw std::invalid_argument("shm: need at least two samples");
  if (!(noise_sd >= 0.0)) throw std::invalid_argument("shm: noise sd must be non-negative");
  if (!(clamp_lower < clamp_upper)) throw std::invalid_argument("shm: clamp range is empty");
  if (mc_samples < 100 || test_samples < 100) throw std::invalid_argument("shm: need at least 100 Monte Carlo samples");
  input_distribution().validate();
  tuning.weights.validate();
}

double shm_damage(const ShmConfig& cfg, std::span<const double> x) {
  if (x.size() != cfg.coefficients.size()) throw std::invalid_argument("shm: input must have five columns");
  double d = cfg.bias;
  for (std::size_t k = 0; k < x.size(); ++k) d += cfg.coefficients[k] * x[k];
  return d;
}

ShmSample shm_generate(const ShmConfig& cfg, std::size_t count, RngStream rng) {
  cfg.validate();
  ShmSample s;
  s.X = sample(cfg.input_distribution(), count, derive_stream(rng, 0));
  s.y.resize(s.X.rows());
  s.noiseless.resize(s.X.rows());
  s.noise.resize(s.X.rows());
  RandomEngine noise(derive_stream(rng, 1));
  for (Eigen::Index i = 0; i < s.X.rows(); ++i) {
    const auto row = s.X.row(i);
    s.noiseless[i] = shm_damage(cfg, std::span<const double>(row.data(), static_cast<std::size_t>(row.size())));
    s.noise[i] = noise.normal(0.0, cfg.noise_sd);
    s.y[i] = std::clamp(s.noiseless[i] + s.noise[i], cfg.clamp_lower, cfg.clamp_upper);
  }
  return s;
}

ExperimentReport run_shm(const ShmConfig& cfg, RngStream rng, const std::string& out_dir) {
  cfg.validate();
  using detail::as_span;

  const ShmSample data = shm_generate(cfg, cfg.n_samples, derive_stream(rng, 1));
  const RegressionData train{data.X, data.y};
  const EmpiricalCdf target = ecdf_build(as_span(data.y));
  const Matrix frozen = sample(cfg.input_distribution(), cfg.mc_samples, derive_stream(rng, 2));

  auto regimes = detail::run_regression_regimes(train, target, frozen, cfg.tuning, derive_stream(rng, 3));

  // Fresh draw shared by all regimes.
  const ShmSample test = shm_generate(cfg, cfg.test_samples, derive_stream(rng, 4));

  ExperimentReport report;
  report.experiment = "shm";
  report.config = {{"n_samples", cfg.n_samples},
                   {"noise_sd", cfg.noise_sd},
                   {"mc_samples", cfg.mc_samples},
                   {"test_samples", cfg.test_samples},
                   {"coefficients", cfg.coefficients},
                   {"bias", cfg.bias},
                   {"seed", rng.seed},
                   {"stream", rng.stream_id},
                   {"tuning", cfg.tuning}};
  for (const auto& r : cfg.ranges) report.config["ranges"].push_back({r.lower, r.upper});

  bool histories_ok = true;
  std::vector<EmpiricalCdf> predicted_cdfs;
  for (auto& regime : regimes) {
    RegimeResult res;
    res.name = regime.name;
    res.theta = regime.theta;
    res.history = regime.history;
    const Vector fit = regime.model.predict(train.X);
    res.train_metrics = {{"rmse", rmse(as_span(train.y), as_span(fit))},
                         {"rows", train.X.rows()},
                         {"converged", regime.model.converged},
                         {"support_vectors", regime.model.support_vectors.rows()}};
    const Vector pred = predict_in_chunks([&](const Matrix& X) { return regime.model.predict(X); }, test.X,
                                          cfg.tuning.workers);
    const EmpiricalCdf predicted = ecdf_build(as_span(pred));
    const ThresholdGrid grid = make_grid(target, predicted, cfg.tuning.grid_size);
    res.cdf_distance = distance(cfg.tuning.distance, target, predicted, grid);
    res.test_metrics = {{"rmse", rmse(as_span(test.y), as_span(pred))},
                        {"rmse_noiseless", rmse(as_span(test.noiseless), as_span(pred))},
                        {"distances", detail::distance_table(target, predicted, cfg.tuning.grid_size)}};
    if (regime.history)
      histories_ok = histories_ok && detail::history_consistent(*regime.history, SearchSpace::regression(), cfg.tuning.budget);
    predicted_cdfs.push_back(predicted);
    report.regimes.push_back(std::move(res));
  }

  const auto& base = report.regime(kBaseline);
  const auto& err = report.regime(kRmseOptimized);
  const auto& prob = report.regime(kProbabilityInformed);
  const double base_rmse = base.train_metrics["rmse"].get<double>();
  const double err_rmse = err.train_metrics["rmse"].get<double>();
  const double prob_rmse = prob.train_metrics["rmse"].get<double>();
  report.verdicts = {
      {"rmse_optimized_lowest_training_rmse", err_rmse <= base_rmse && err_rmse <= prob_rmse},
      {"probability_informed_closer_cdf_than_rmse_optimized", prob.cdf_distance < err.cdf_distance}};
  bool finite = true;
  for (const auto& r : report.regimes) finite = finite && std::isfinite(r.cdf_distance);
  report.invariants = {{"histories_consistent", histories_ok},
                       {"metrics_finite", finite}};
  report.extra = {{"target_cdf_knots", target.size()},
                  {"train_noise_sd", std::sqrt(data.noise.squaredNorm() / static_cast<double>(data.noise.size()))}};

  if (!out_dir.empty()) {
    persist_report(report, out_dir);
    target.save_csv(detail::join_path(out_dir, "cdf_target.csv"));
    for (std::size_t k = 0; k < regimes.size(); ++k)
      predicted_cdfs[k].save_csv(detail::join_path(out_dir, "cdf_predicted_" + regimes[k].name + ".csv"));
  }
  return report;
}

}  // namespace cdfmatch

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

#include <Eigen/QR>

#include "cdfmatch/experiments.hpp"
#include "cdfmatch/metrics.hpp"
#include "experiments_internal.hpp"

namespace cdfmatch {

void PolyDemoConfig::validate() const {
  if (orders.empty()) throw std::invalid_argument("polydemo: candidate order list is empty");
  for (int o : orders)
    if (o < 0 || o > 9) throw std::invalid_argument("polydemo: orders must lie in 0..9");
  if (order_truth < 0 || order_truth > 9) throw std::invalid_argument("polydemo: truth order must lie in 0..9");
  const int highest = *std::max_element(orders.begin(), orders.end());
  if (n_train <= static_cast<std::size_t>(highest)) throw std::invalid_argument("polydemo: too few training points");
  if (!(noise_sd >= 0.0)) throw std::invalid_argument("polydemo: noise sd must be non-negative");
  if (mc_samples < 100) throw std::invalid_argument("polydemo: need at least 100 Monte Carlo samples");
}

std::vector<double> reference_polynomial(int order) {
  static constexpr double kCoefficients[] = {0.2, 1.0, -0.8, -1.6, 0.9, 1.2, -0.7, 0.5, 0.4, -0.3};
  if (order < 0 || order > 9) throw std::invalid_argument("reference polynomial order must lie in 0..9");
  return {std::begin(kCoefficients), std::begin(kCoefficients) + order + 1};
}

double polyval(std::span<const double> coefficients, double x) {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int order) {
  if (x.size() != y.size()) throw std::invalid_argument("polyfit: length mismatch");
  if (order < 0 || x.size() <= static_cast<std::size_t>(order))
    throw std::invalid_argument("polyfit: not enough points for the order");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd V(n, order + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    double p = 1.0;
    for (int k = 0; k <= order; ++k) {
      V(i, k) = p;
      p *= x[static_cast<std::size_t>(i)];
    }
  }
  const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
  const Eigen::VectorXd c = V.colPivHouseholderQr().solve(rhs);
  return {c.data(), c.data() + c.size()};
}

ExperimentReport run_polydemo(const PolyDemoConfig& cfg, RngStream rng, const std::string& out_dir) {
  cfg.validate();
  using detail::as_span;

  const std::vector<double> truth = reference_polynomial(cfg.order_truth);
  const InputDistribution dist({Marginal::uniform(-1.0, 1.0)});
  auto model_of = [](std::vector<double> coef) {
    return [coef = std::move(coef)](const Matrix& X) {
      Vector out(X.rows());
      for (Eigen::Index i = 0; i < X.rows(); ++i) out[i] = polyval(coef, X(i, 0));
      return out;
    };
  };

  const Matrix x_train = sample(dist, cfg.n_train, derive_stream(rng, 1));
  Vector y_train = model_of(truth)(x_train);
  RandomEngine noise(derive_stream(rng, 2));
  for (Eigen::Index i = 0; i < y_train.size(); ++i) y_train[i] += noise.normal(0.0, cfg.noise_sd);

  // Target CDF of the true response by plain Monte Carlo; the same inputs
  // then serve every candidate.
  const MonteCarloCdf target = mc_cdf(model_of(truth), dist, cfg.mc_samples, derive_stream(rng, 3));

  struct Row {
    int order;
    double rmse;
    double distance;
    EmpiricalCdf cdf;
  };
  std::vector<Row> rows;
  const std::span<const double> xs(x_train.data(), static_cast<std::size_t>(x_train.rows()));
  for (int order : cfg.orders) {
    const auto coef = polyfit(xs, as_span(y_train), order);
    const auto predict = model_of(coef);
    const Vector fit = predict(x_train);
    const EmpiricalCdf predicted = ecdf_build(as_span(predict(target.inputs)));
    const ThresholdGrid grid = make_grid(target.cdf, predicted, cfg.grid_size);
    rows.push_back({order, rmse(as_span(y_train), as_span(fit)), distance(cfg.distance, target.cdf, predicted, grid), predicted});
  }

  double max_rmse = 0.0, max_dist = 0.0;
  for (const auto& r : rows) {
    max_rmse = std::max(max_rmse, r.rmse);
    max_dist = std::max(max_dist, r.distance);
  }
  std::size_t selected = 0, by_rmse = 0;
  double best_combined = std::numeric_limits<double>::infinity();
  nlohmann::json table = nlohmann::json::array();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double nr = max_rmse > 0.0 ? rows[k].rmse / max_rmse : 0.0;
    const double nd = max_dist > 0.0 ? rows[k].distance / max_dist : 0.0;
    const double combined = nr + nd;
    if (combined < best_combined) {
      best_combined = combined;
      selected = k;
    }
    if (rows[k].rmse < rows[by_rmse].rmse) by_rmse = k;
    table.push_back({{"order", rows[k].order},
                     {"train_rmse", rows[k].rmse},
                     {"cdf_distance", rows[k].distance},
                     {"normalized_rmse", nr},
                     {"normalized_distance", nd},
                     {"combined", combined}});
  }

  ExperimentReport report;
  report.experiment = "polydemo";
  report.config = {{"order_truth", cfg.order_truth},
                   {"orders", cfg.orders},
                   {"n_train", cfg.n_train},
                   {"noise_sd", cfg.noise_sd},
                   {"mc_samples", cfg.mc_samples},
                   {"distance", to_string(cfg.distance)},
                   {"grid_size", cfg.grid_size},
                   {"seed", rng.seed},
                   {"stream", rng.stream_id}};
  report.extra = {{"table", table},
                  {"selected_order", rows[selected].order},
                  {"rmse_selected_order", rows[by_rmse].order},
                  {"truth_coefficients", truth}};

  const bool truth_listed = std::find(cfg.orders.begin(), cfg.orders.end(), cfg.order_truth) != cfg.orders.end();
  if (truth_listed) report.verdicts.emplace_back("combined_selects_truth_order", rows[selected].order == cfg.order_truth);
  bool finite = true;
  for (const auto& r : rows) finite = finite && std::isfinite(r.rmse) && std::isfinite(r.distance);
  report.invariants = {{"selection_in_candidates", selected < rows.size()}, {"metrics_finite", finite}};

  if (!out_dir.empty()) {
    persist_report(report, out_dir);
    target.cdf.save_csv(detail::join_path(out_dir, "cdf_target.csv"));
    std::ofstream os(detail::join_path(out_dir, "polydemo_table.csv"));
    os << "order,train_rmse,cdf_distance,combined\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& row : table)
      os << row["order"].get<int>() << ',' << row["train_rmse"].get<double>() << ','
         << row["cdf_distance"].get<double>() << ',' << row["combined"].get<double>() << '\n';
    for (const auto& r : rows) r.cdf.save_csv(detail::join_path(out_dir, "cdf_predicted_order" + std::to_string(r.order) + ".csv"));
  }
  return report;
}

}  // namespace cdfmatch

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

#include "cdfmatch/experiments.hpp"
#include "experiments_internal.hpp"

namespace cdfmatch {

const RegimeResult& ExperimentReport::regime(const std::string& name) const {
  for (const auto& r : regimes)
    if (r.name == name) return r;
  throw std::out_of_range("no regime named " + name);
}

bool ExperimentReport::invariants_held() const {
  return std::all_of(invariants.begin(), invariants.end(), [](const auto& kv) { return kv.second; });
}

bool ExperimentReport::verdict(const std::string& name) const {
  for (const auto& [key, value] : verdicts)
    if (key == name) return value;
  throw std::out_of_range("no verdict named " + name);
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["config"] = config;
  j["regimes"] = nlohmann::json::array();
  for (const auto& r : regimes) {
    nlohmann::json e = {{"name", r.name},
                        {"theta", r.theta},
                        {"train_metrics", r.train_metrics},
                        {"test_metrics", r.test_metrics},
                        {"cdf_distance", r.cdf_distance}};
    if (r.history) {
      e["best_loss"] = r.history->best_loss;
      e["trials"] = r.history->history.size();
    }
    j["regimes"].push_back(std::move(e));
  }
  for (const auto& [k, v] : verdicts) j["verdicts"][k] = v;
  for (const auto& [k, v] : invariants) j["invariants"][k] = v;
  j["extra"] = extra;
  return j;
}

std::string results_json_text(const ExperimentReport& report) { return report.to_json().dump(2) + "\n"; }

void persist_report(const ExperimentReport& report, const std::string& out_dir) {
  if (out_dir.empty()) return;
  detail::ensure_directory(out_dir);
  {
    std::ofstream os(detail::join_path(out_dir, "results.json"));
    if (!os) throw std::runtime_error("cannot write results.json in " + out_dir);
    os << results_json_text(report);
  }
  for (const auto& r : report.regimes) {
    if (!r.history) continue;
    write_trials_csv(*r.history, detail::join_path(out_dir, "trials_" + r.name + ".csv"));
    std::ofstream hist(detail::join_path(out_dir, "history_" + r.name + ".json"));
    hist << nlohmann::json(*r.history).dump(2) << '\n';
    std::ofstream conv(detail::join_path(out_dir, "convergence_" + r.name + ".csv"));
    conv << "index,total,best_so_far\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& t : r.history->history) conv << t.index << ',' << t.breakdown.total << ',' << t.best_so_far << '\n';
  }
}

void to_json(nlohmann::json& j, const TuningSettings& t) {
  j = {{"budget", t.budget},
       {"strategy", to_string(t.strategy)},
       {"distance", to_string(t.distance)},
       {"weights", t.weights},
       {"grid_size", t.grid_size}};
}

void from_json(const nlohmann::json& j, TuningSettings& t) {
  t.budget = j.value("budget", t.budget);
  if (j.contains("strategy")) t.strategy = parse_strategy(j.at("strategy").get<std::string>());
  if (j.contains("distance")) t.distance = parse_distance_kind(j.at("distance").get<std::string>());
  if (j.contains("weights")) t.weights = j.at("weights").get<LossWeights>();
  t.grid_size = j.value("grid_size", t.grid_size);
}

namespace detail {

std::span<const double> as_span(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

bool history_consistent(const OptResult& result, const SearchSpace& space, std::size_t budget) {
  if (result.history.empty() || result.history.size() > budget) return false;
  double running = std::numeric_limits<double>::infinity();
  double minimum = running;
  for (std::size_t i = 0; i < result.history.size(); ++i) {
    const auto& t = result.history[i];
    if (t.index != i || !space.contains(t.theta)) return false;
    running = std::min(running, t.breakdown.total);
    if (t.best_so_far != running) return false;
    minimum = std::min(minimum, t.breakdown.total);
  }
  return result.best_loss == minimum;
}

nlohmann::json distance_table(const EmpiricalCdf& target, const EmpiricalCdf& predicted,
                              std::size_t grid_size) {
  const ThresholdGrid grid = make_grid(target, predicted, grid_size);
  return {{"bhattacharyya", bhattacharyya_distance(target, predicted, grid)},
          {"kl", kl_divergence(target, predicted, grid)},
          {"l1", l1_cdf_distance(target, predicted, grid)},
          {"l1_raw_sum", l1_cdf_raw_sum(target, predicted, grid)}};
}

std::vector<RegressionRegime> run_regression_regimes(const RegressionData& train,
                                                     const EmpiricalCdf& target,
                                                     const Matrix& frozen_inputs,
                                                     const TuningSettings& tuning, RngStream hpo_rng) {
  std::vector<RegressionRegime> out;

  RegressionRegime baseline;
  baseline.name = kBaseline;
  baseline.theta = baseline_theta(as_span(train.y), Task::regression);
  baseline.model = svr_train(train.X, train.y, baseline.theta);
  out.push_back(std::move(baseline));

  ObjectiveConfig cfg;
  cfg.distance = tuning.distance;
  cfg.mc_samples = static_cast<std::size_t>(frozen_inputs.rows());
  cfg.grid_size = tuning.grid_size;
  cfg.target_cdf = target;
  cfg.frozen_mc_inputs = frozen_inputs;
  cfg.workers = tuning.workers;

  const SearchSpace space = SearchSpace::regression();
  for (const auto& [name, weights] :
       {std::pair<std::string, LossWeights>{kRmseOptimized, LossWeights{1.0, 0.0, 0.0}},
        std::pair<std::string, LossWeights>{kProbabilityInformed, tuning.weights}}) {
    cfg.weights = weights;
    const Objective objective = [&](const HyperParams& theta) {
      return evaluate_objective(theta, train, cfg, hpo_rng);
    };
    RegressionRegime regime;
    regime.name = name;
    regime.history = optimize(objective, space, tuning.budget, tuning.strategy, hpo_rng);
    regime.theta = regime.history->best_theta;
    regime.model = svr_train(train.X, train.y, regime.theta);
    out.push_back(std::move(regime));
  }
  return out;
}

}  // namespace detail
}  // namespace cdfmatch

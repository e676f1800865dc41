// Command-line driver for the distribution-matching experiments.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cdfmatch/cdf_distance.hpp"
#include "cdfmatch/ecdf.hpp"
#include "cdfmatch/experiments.hpp"

namespace {

using nlohmann::json;

struct GlobalFlags {
  std::uint64_t seed = 1;
  std::optional<std::size_t> budget;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::string> distance;
  std::optional<std::string> strategy;
  std::string out;
  std::string config;
  std::size_t workers = 1;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path);
  return json::parse(is);
}

// Config file first, command-line flags second.
void apply_tuning(cdfmatch::TuningSettings& t, const json& file, const GlobalFlags& g) {
  if (file.contains("budget")) t.budget = file["budget"].get<std::size_t>();
  if (file.contains("strategy")) t.strategy = cdfmatch::parse_strategy(file["strategy"].get<std::string>());
  if (file.contains("distance")) t.distance = cdfmatch::parse_distance_kind(file["distance"].get<std::string>());
  if (file.contains("alpha")) t.weights.alpha = file["alpha"].get<double>();
  if (file.contains("beta")) t.weights.beta = file["beta"].get<double>();
  if (file.contains("grid_size")) t.grid_size = file["grid_size"].get<std::size_t>();
  if (g.budget) t.budget = *g.budget;
  if (g.strategy) t.strategy = cdfmatch::parse_strategy(*g.strategy);
  if (g.distance) t.distance = cdfmatch::parse_distance_kind(*g.distance);
  if (g.alpha) t.weights.alpha = *g.alpha;
  if (g.beta) t.weights.beta = *g.beta;
  t.workers = g.workers;
}

std::uint64_t effective_seed(const json& file, const GlobalFlags& g, const CLI::App& app) {
  if (app.count("--seed") == 0 && file.contains("seed")) return file["seed"].get<std::uint64_t>();
  return g.seed;
}

std::string effective_out(const json& file, const GlobalFlags& g) {
  if (g.out.empty() && file.contains("out")) return file["out"].get<std::string>();
  return g.out;
}

int finish(const cdfmatch::ExperimentReport& report) {
  json summary = {{"experiment", report.experiment}, {"verdicts", json::object()}, {"invariants", json::object()}};
  for (const auto& r : report.regimes) {
    summary["regimes"][r.name] = {{"theta", r.theta}, {"test", r.test_metrics}, {"cdf_distance", r.cdf_distance}};
  }
  for (const auto& [k, v] : report.verdicts) summary["verdicts"][k] = v;
  for (const auto& [k, v] : report.invariants) summary["invariants"][k] = v;
  if (report.experiment == "polydemo") summary["table"] = report.extra["table"];
  if (report.experiment == "denoise") {
    summary["noisy_psnr"] = report.extra["noisy_psnr"];
    summary["noisy_ssim"] = report.extra["noisy_ssim"];
  }
  std::cout << summary.dump(2) << '\n';
  return report.invariants_held() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distribution-matching SVR/SVC experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
  app.add_option("--budget", g.budget, "Objective evaluations per tuned regime");
  app.add_option("--alpha", g.alpha, "Weight of the data term");
  app.add_option("--beta", g.beta, "Weight of the distribution term");
  app.add_option("--distance", g.distance, "CDF distance")
      ->check(CLI::IsMember({"l1", "bhattacharyya", "kl", "wasserstein1"}));
  app.add_option("--strategy", g.strategy, "Hyperparameter search strategy")->check(CLI::IsMember({"smbo", "random"}));
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--config", g.config, "JSON config file (flags override)");
  app.add_option("--workers", g.workers, "Prediction threads (results do not depend on it)")->capture_default_str();

  // shm
  auto* shm = app.add_subcommand("shm", "Structural health monitoring regression");
  std::optional<std::size_t> shm_samples, shm_mc, shm_test;
  std::optional<double> shm_noise;
  shm->add_option("--samples", shm_samples, "Training samples");
  shm->add_option("--noise-sd", shm_noise, "Measurement noise standard deviation");
  shm->add_option("--mc-samples", shm_mc, "Monte Carlo inputs for the predicted CDF");
  shm->add_option("--test-samples", shm_test, "Fresh evaluation samples");

  // denoise
  auto* den = app.add_subcommand("denoise", "Patch-based SVR image denoising");
  std::optional<std::string> den_image;
  std::optional<double> den_noise;
  std::optional<std::size_t> den_patch, den_train, den_size, den_mc;
  den->add_option("--image", den_image, "Clean grayscale PGM (default: built-in synthetic image)");
  den->add_option("--noise-sd", den_noise, "Additive Gaussian noise sd");
  den->add_option("--patch", den_patch, "Odd patch size");
  den->add_option("--train-pixels", den_train, "Training pixels");
  den->add_option("--size", den_size, "Synthetic image side length");
  den->add_option("--mc-samples", den_mc, "Evaluation patches for the predicted CDF");

  // ionosphere
  auto* ion = app.add_subcommand("ionosphere", "Ionosphere SVC classification");
  std::optional<std::string> ion_data;
  std::optional<double> ion_fraction;
  std::vector<std::uint64_t> ion_seeds;
  ion->add_option("--data", ion_data, "Ionosphere CSV file");
  ion->add_option("--train-fraction", ion_fraction, "Training share of the rows");
  ion->add_option("--seeds", ion_seeds, "Split seeds (median reported)");

  // polydemo
  auto* poly = app.add_subcommand("polydemo", "Polynomial model selection demo");
  std::optional<int> poly_truth;
  std::vector<int> poly_orders;
  std::optional<std::size_t> poly_n;
  std::optional<double> poly_noise;
  poly->add_option("--order-truth", poly_truth, "Order of the generating polynomial");
  poly->add_option("--orders", poly_orders, "Candidate orders");
  poly->add_option("--n-train", poly_n, "Training points");
  poly->add_option("--noise-sd", poly_noise, "Noise sd");

  // distance
  auto* dist = app.add_subcommand("distance", "Compare two CDF CSV files");
  std::string cdf_a, cdf_b;
  std::size_t grid_size = 100;
  std::string interp = "linear";
  std::string density = "masses";
  dist->add_option("target", cdf_a, "Target CDF CSV (y,p)")->required();
  dist->add_option("predicted", cdf_b, "Predicted CDF CSV (y,p)")->required();
  dist->add_option("--grid", grid_size, "Number of thresholds")->capture_default_str();
  dist->add_option("--interp", interp, "Interpolation between knots")->check(CLI::IsMember({"linear", "step"}));
  dist->add_option("--density", density, "How log distances read the CDFs")
      ->check(CLI::IsMember({"masses", "literal"}));

  CLI11_PARSE(app, argc, argv);

  try {
    const json file = load_config(g.config);
    const std::uint64_t seed = effective_seed(file, g, app);
    const std::string out = effective_out(file, g);

    if (*shm) {
      cdfmatch::ShmConfig cfg;
      const json sec = file.value("shm", json::object());
      cfg.n_samples = sec.value("n_samples", cfg.n_samples);
      cfg.noise_sd = sec.value("noise_sd", cfg.noise_sd);
      cfg.mc_samples = sec.value("mc_samples", cfg.mc_samples);
      cfg.test_samples = sec.value("test_samples", cfg.test_samples);
      if (sec.contains("ranges")) {
        const auto marginals = sec["ranges"].get<std::vector<cdfmatch::Marginal>>();
        if (marginals.size() != cfg.ranges.size()) throw std::runtime_error("shm: ranges must list five marginals");
        for (std::size_t k = 0; k < marginals.size(); ++k) {
          if (marginals[k].kind != cdfmatch::Marginal::Kind::uniform)
            throw std::runtime_error("shm: ranges must be uniform marginals");
          cfg.ranges[k] = {marginals[k].lower(), marginals[k].upper()};
        }
      }
      if (shm_samples) cfg.n_samples = *shm_samples;
      if (shm_noise) cfg.noise_sd = *shm_noise;
      if (shm_mc) cfg.mc_samples = *shm_mc;
      if (shm_test) cfg.test_samples = *shm_test;
      apply_tuning(cfg.tuning, file, g);
      return finish(cdfmatch::run_shm(cfg, {seed, 0}, out));
    }
    if (*den) {
      cdfmatch::DenoiseConfig cfg;
      const json sec = file.value("denoise", json::object());
      cfg.image_path = sec.value("image", cfg.image_path);
      cfg.noise_sd = sec.value("noise_sd", cfg.noise_sd);
      cfg.patch = sec.value("patch", cfg.patch);
      cfg.train_pixels = sec.value("train_pixels", cfg.train_pixels);
      cfg.synthetic_size = sec.value("size", cfg.synthetic_size);
      cfg.mc_samples = sec.value("mc_samples", cfg.mc_samples);
      if (den_image) cfg.image_path = *den_image;
      if (den_noise) cfg.noise_sd = *den_noise;
      if (den_patch) cfg.patch = *den_patch;
      if (den_train) cfg.train_pixels = *den_train;
      if (den_size) cfg.synthetic_size = *den_size;
      if (den_mc) cfg.mc_samples = *den_mc;
      apply_tuning(cfg.tuning, file, g);
      return finish(cdfmatch::run_denoise(cfg, {seed, 0}, out));
    }
    if (*ion) {
      cdfmatch::IonosphereConfig cfg;
      const json sec = file.value("ionosphere", json::object());
      cfg.path = sec.value("data", cfg.path);
      cfg.train_fraction = sec.value("train_fraction", cfg.train_fraction);
      if (sec.contains("seeds")) cfg.seeds = sec["seeds"].get<std::vector<std::uint64_t>>();
      if (ion_data) cfg.path = *ion_data;
      if (ion_fraction) cfg.train_fraction = *ion_fraction;
      if (!ion_seeds.empty()) cfg.seeds = ion_seeds;
      apply_tuning(cfg.tuning, file, g);
      return finish(cdfmatch::run_ionosphere(cfg, out));
    }
    if (*poly) {
      cdfmatch::PolyDemoConfig cfg;
      const json sec = file.value("polydemo", json::object());
      cfg.order_truth = sec.value("order_truth", cfg.order_truth);
      if (sec.contains("orders")) cfg.orders = sec["orders"].get<std::vector<int>>();
      cfg.n_train = sec.value("n_train", cfg.n_train);
      cfg.noise_sd = sec.value("noise_sd", cfg.noise_sd);
      if (file.contains("distance")) cfg.distance = cdfmatch::parse_distance_kind(file["distance"].get<std::string>());
      if (g.distance) cfg.distance = cdfmatch::parse_distance_kind(*g.distance);
      if (poly_truth) cfg.order_truth = *poly_truth;
      if (!poly_orders.empty()) cfg.orders = poly_orders;
      if (poly_n) cfg.n_train = *poly_n;
      if (poly_noise) cfg.noise_sd = *poly_noise;
      return finish(cdfmatch::run_polydemo(cfg, {seed, 0}, out));
    }
    if (*dist) {
      const auto mode = interp == "step" ? cdfmatch::Interpolation::step : cdfmatch::Interpolation::linear;
      const auto density_mode = density == "literal" ? cdfmatch::DensityMode::literal_cdf : cdfmatch::DensityMode::masses;
      const auto f = cdfmatch::EmpiricalCdf::load_csv(cdf_a, mode);
      const auto h = cdfmatch::EmpiricalCdf::load_csv(cdf_b, mode);
      const auto grid = cdfmatch::make_grid(f, h, grid_size);
      json result = {{"grid", {{"size", grid.size()}, {"lower", grid.thresholds.front()}, {"upper", grid.thresholds.back()}}},
                     {"l1", cdfmatch::l1_cdf_distance(f, h, grid)},
                     {"l1_raw_sum", cdfmatch::l1_cdf_raw_sum(f, h, grid)},
                     {"wasserstein1", cdfmatch::distance(cdfmatch::DistanceKind::wasserstein1, f, h, grid)},
                     {"bhattacharyya", cdfmatch::bhattacharyya_distance(f, h, grid, density_mode)},
                     {"kl", cdfmatch::kl_divergence(f, h, grid, density_mode)}};
      if (g.distance) result["selected"] = cdfmatch::distance(cdfmatch::parse_distance_kind(*g.distance), f, h, grid, density_mode);
      std::cout << result.dump(2) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

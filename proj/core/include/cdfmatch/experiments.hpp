#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdfmatch/cdf_distance.hpp"
#include "cdfmatch/hpo.hpp"
#include "cdfmatch/image.hpp"
#include "cdfmatch/loss.hpp"
#include "cdfmatch/rng.hpp"

namespace cdfmatch {

/// Names of the three compared training regimes.
inline constexpr const char* kBaseline = "baseline";
inline constexpr const char* kRmseOptimized = "rmse_optimized";
inline constexpr const char* kProbabilityInformed = "probability_informed";

/// Settings shared by the tuned regimes.
struct TuningSettings {
  std::size_t budget = 60;
  Strategy strategy = Strategy::smbo;
  DistanceKind distance = DistanceKind::bhattacharyya;
  LossWeights weights{0.3, 0.7, 0.0};
  std::size_t grid_size = 100;
  std::size_t workers = 1;
};

struct RegimeResult {
  std::string name;
  HyperParams theta;
  nlohmann::json train_metrics = nlohmann::json::object();
  nlohmann::json test_metrics = nlohmann::json::object();
  double cdf_distance = 0.0;
  std::optional<OptResult> history;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json config = nlohmann::json::object();
  std::vector<RegimeResult> regimes;
  /// Expected qualitative outcomes (reported, do not affect the exit code).
  std::vector<std::pair<std::string, bool>> verdicts;
  /// Run-level consistency checks; the CLI exits non-zero if any fails.
  std::vector<std::pair<std::string, bool>> invariants;
  nlohmann::json extra = nlohmann::json::object();

  const RegimeResult& regime(const std::string& name) const;
  bool invariants_held() const;
  bool verdict(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// Writes results.json, trials_<regime>.csv, history_<regime>.json and
/// convergence_<regime>.csv into `out_dir` (created if missing).
void persist_report(const ExperimentReport& report, const std::string& out_dir);

/// Serialized results.json text (stable formatting).
std::string results_json_text(const ExperimentReport& report);

// ---------------------------------------------------------------------------
// Structural health monitoring regression

struct Range {
  double lower = 0.0;
  double upper = 1.0;
};

struct ShmConfig {
  std::size_t n_samples = 400;
  double noise_sd = 10.0;
  /// Frequency [Hz], strain [um/m], displacement [mm], temperature [C], load [kN].
  std::array<Range, 5> ranges{{{10, 30}, {50, 200}, {0.5, 2.0}, {20, 60}, {10, 100}}};
  std::array<double, 5> coefficients{0.5, 0.3, -0.2, 0.1, 0.05};
  double bias = 0.0;
  double clamp_lower = 0.0;
  double clamp_upper = 100.0;
  std::size_t mc_samples = 10000;
  std::size_t test_samples = 10000;
  TuningSettings tuning;

  InputDistribution input_distribution() const;
  void validate() const;
};

/// Noise-free damage level for one input row.
double shm_damage(const ShmConfig& cfg, std::span<const double> x);

struct ShmSample {
  Matrix X;
  Vector y;           // noisy, clamped
  Vector noiseless;   // before noise and clamping
  Vector noise;
};

ShmSample shm_generate(const ShmConfig& cfg, std::size_t count, RngStream rng);

ExperimentReport run_shm(const ShmConfig& cfg, RngStream rng, const std::string& out_dir = {});

// ---------------------------------------------------------------------------
// Patch-based denoising

struct DenoiseConfig {
  std::string image_path;  // empty: built-in synthetic image
  std::size_t synthetic_size = 128;
  double noise_sd = 0.1;
  std::size_t patch = 5;
  std::size_t train_pixels = 1500;
  std::size_t mc_samples = 10000;
  TuningSettings tuning;

  void validate() const;
};

struct DenoiseOutputs {
  GrayImage clean;
  GrayImage noisy;
  std::vector<std::pair<std::string, GrayImage>> denoised;
};

ExperimentReport run_denoise(const DenoiseConfig& cfg, RngStream rng,
                             const std::string& out_dir = {},
                             DenoiseOutputs* images = nullptr);

// ---------------------------------------------------------------------------
// Ionosphere classification

struct IonosphereConfig {
  std::string path = "data/ionosphere.data";
  double train_fraction = 0.2;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  TuningSettings tuning;

  void validate() const;
};

ExperimentReport run_ionosphere(const IonosphereConfig& cfg, const std::string& out_dir = {});

// ---------------------------------------------------------------------------
// One-dimensional polynomial model selection

struct PolyDemoConfig {
  int order_truth = 5;
  std::vector<int> orders{1, 2, 3, 4, 5};
  std::size_t n_train = 40;
  double noise_sd = 0.05;
  std::size_t mc_samples = 10000;
  DistanceKind distance = DistanceKind::wasserstein1;
  std::size_t grid_size = 100;

  void validate() const;
};

/// Coefficients (ascending powers) of the reference polynomial of `order` on [-1, 1].
std::vector<double> reference_polynomial(int order);
double polyval(std::span<const double> coefficients, double x);
/// Least-squares polynomial coefficients (ascending powers).
std::vector<double> polyfit(std::span<const double> x, std::span<const double> y, int order);

ExperimentReport run_polydemo(const PolyDemoConfig& cfg, RngStream rng,
                              const std::string& out_dir = {});

void to_json(nlohmann::json& j, const TuningSettings& t);
void from_json(const nlohmann::json& j, TuningSettings& t);

}  // namespace cdfmatch

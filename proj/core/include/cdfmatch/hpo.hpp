#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cdfmatch/kernel.hpp"
#include "cdfmatch/loss.hpp"
#include "cdfmatch/rng.hpp"

namespace cdfmatch {

/// Box in log10 space plus the kernel families to try.
struct SearchSpace {
  double kernel_scale_log10_min = -2.0;
  double kernel_scale_log10_max = 3.0;
  double box_log10_min = -3.0;
  double box_log10_max = 3.0;
  double epsilon_log10_min = -3.0;
  double epsilon_log10_max = 0.0;
  std::vector<KernelKind> kernels{KernelKind::linear, KernelKind::polynomial,
                                  KernelKind::gaussian};
  bool include_epsilon = true;

  static SearchSpace regression() { return {}; }
  static SearchSpace classification() {
    SearchSpace s;
    s.include_epsilon = false;
    return s;
  }

  std::size_t continuous_dims() const { return include_epsilon ? 3 : 2; }
  /// Maps a point of the unit cube to hyperparameters (clamped to bounds).
  HyperParams decode(KernelKind kernel, std::span<const double> unit) const;
  bool contains(const HyperParams& h) const;
};

enum class Strategy { smbo, random };
Strategy parse_strategy(std::string_view name);
std::string to_string(Strategy s);

struct TrialRecord {
  std::size_t index = 0;
  HyperParams theta;
  LossBreakdown breakdown;
  double best_so_far = 0.0;
  bool failed = false;
};

struct OptResult {
  HyperParams best_theta;
  double best_loss = 0.0;
  std::vector<TrialRecord> history;
};

using Objective = std::function<LossBreakdown(const HyperParams&)>;

struct OptimizerOptions {
  std::size_t candidates = 2048;
  std::size_t max_initial = 10;
};

/// Minimizes `objective` with at most `budget` evaluations (budget >= 5).
///
/// The budget is split evenly across kernel families. smbo seeds each family
/// with a Latin hypercube design and then proposes points maximizing expected
/// improvement under a Gaussian-process surrogate of log(total). A trial that
/// throws is recorded with total = +inf; if every trial fails the call throws.
OptResult optimize(const Objective& objective, const SearchSpace& space, std::size_t budget,
                   Strategy strategy, RngStream rng, const OptimizerOptions& options = {});

enum class Task { regression, classification };

/// Default hyperparameters: gaussian kernel, scale 1, box 1, and for
/// regression epsilon = IQR(y) / 13.49 clamped into bounds.
HyperParams baseline_theta(std::span<const double> y, Task task);

/// Interquartile range with linear interpolation between order statistics.
double interquartile_range(std::span<const double> values);

/// CSV with columns index,kernel,K,B,eps,data_loss,prob_loss,total,best_so_far.
void write_trials_csv(const OptResult& result, const std::string& path);

void to_json(nlohmann::json& j, const TrialRecord& t);
void to_json(nlohmann::json& j, const OptResult& r);

}  // namespace cdfmatch

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cdfmatch/ecdf.hpp"

namespace cdfmatch {

/// Distances between a target CDF and a predicted CDF.
///
/// l1_cdf and wasserstein1 coincide for one-dimensional CDFs; both names are
/// kept for reporting.
enum class DistanceKind { l1_cdf, bhattacharyya, kl, wasserstein1 };

/// How the log-based distances read a CDF. `masses` compares probability
/// masses between thresholds; `literal_cdf` plugs CDF values straight into
/// the integrals, which is not a proper divergence but is kept for comparison.
enum class DensityMode { masses, literal_cdf };

DistanceKind parse_distance_kind(std::string_view name);
std::string to_string(DistanceKind kind);

/// Probability masses on the K + 1 cells cut by a grid of K thresholds.
struct DiscreteMasses {
  std::vector<double> masses;

  std::size_t size() const { return masses.size(); }
};

/// Floor applied to coefficients and probabilities before taking logs.
inline constexpr double kLogFloor = 1e-12;

DiscreteMasses cdf_to_masses(const EmpiricalCdf& cdf, const ThresholdGrid& grid);

/// -ln(sum sqrt(p q)), coefficient floored at kLogFloor.
double bhattacharyya(const DiscreteMasses& p, const DiscreteMasses& q);
/// sum p ln(p / q), q floored at kLogFloor, p == 0 terms skipped.
double kl(const DiscreteMasses& p, const DiscreteMasses& q);

/// Riemann sum of |f - g| times the grid spacing.
double l1_cdf_distance(const EmpiricalCdf& f, const EmpiricalCdf& g, const ThresholdGrid& grid);
/// The same sum without the spacing factor.
double l1_cdf_raw_sum(const EmpiricalCdf& f, const EmpiricalCdf& g, const ThresholdGrid& grid);

double bhattacharyya_distance(const EmpiricalCdf& f, const EmpiricalCdf& g,
                              const ThresholdGrid& grid,
                              DensityMode mode = DensityMode::masses);

/// Asymmetric; `f_true` is the reference distribution.
double kl_divergence(const EmpiricalCdf& f_true, const EmpiricalCdf& g_pred,
                     const ThresholdGrid& grid, DensityMode mode = DensityMode::masses);

double distance(DistanceKind kind, const EmpiricalCdf& f, const EmpiricalCdf& g,
                const ThresholdGrid& grid, DensityMode mode = DensityMode::masses);

}  // namespace cdfmatch

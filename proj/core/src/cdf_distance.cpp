#include "cdfmatch/cdf_distance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cdfmatch {

DistanceKind parse_distance_kind(std::string_view name) {
  if (name == "l1" || name == "l1_cdf") return DistanceKind::l1_cdf;
  if (name == "bhattacharyya") return DistanceKind::bhattacharyya;
  if (name == "kl") return DistanceKind::kl;
  if (name == "wasserstein1") return DistanceKind::wasserstein1;
  throw std::invalid_argument("unknown distance '" + std::string(name) + "'");
}

std::string to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::l1_cdf: return "l1";
    case DistanceKind::bhattacharyya: return "bhattacharyya";
    case DistanceKind::kl: return "kl";
    case DistanceKind::wasserstein1: return "wasserstein1";
  }
  return "unknown";
}

DiscreteMasses cdf_to_masses(const EmpiricalCdf& cdf, const ThresholdGrid& grid) {
  grid.validate();
  const std::size_t k = grid.size();
  DiscreteMasses out;
  out.masses.resize(k + 1);
  double previous = 0.0;
  double partial = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double value = cdf.eval(grid.thresholds[j]);
    out.masses[j] = std::max(0.0, value - previous);
    partial += out.masses[j];
    previous = value;
  }
  out.masses[k] = std::max(0.0, 1.0 - partial);
  return out;
}

namespace {

void check_same_size(const DiscreteMasses& p, const DiscreteMasses& q) {
  if (p.size() != q.size() || p.size() == 0)
    throw std::invalid_argument("mass vectors must be non-empty and equally long");
}

}  // namespace

double bhattacharyya(const DiscreteMasses& p, const DiscreteMasses& q) {
  check_same_size(p, q);
  double coefficient = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) coefficient += std::sqrt(p.masses[j] * q.masses[j]);
  // Rounding can push the coefficient of identical inputs a hair above 1.
  return std::max(0.0, -std::log(std::max(coefficient, kLogFloor)));
}

double kl(const DiscreteMasses& p, const DiscreteMasses& q) {
  check_same_size(p, q);
  double sum = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double pj = p.masses[j];
    if (pj <= 0.0) continue;
    sum += pj * std::log(pj / std::max(q.masses[j], kLogFloor));
  }
  return std::max(0.0, sum);
}

double l1_cdf_raw_sum(const EmpiricalCdf& f, const EmpiricalCdf& g, const ThresholdGrid& grid) {
  grid.validate();
  double sum = 0.0;
  for (double y : grid.thresholds) sum += std::abs(f.eval(y) - g.eval(y));
  return sum;
}

double l1_cdf_distance(const EmpiricalCdf& f, const EmpiricalCdf& g, const ThresholdGrid& grid) {
  return l1_cdf_raw_sum(f, g, grid) * grid.spacing();
}

double bhattacharyya_distance(const EmpiricalCdf& f, const EmpiricalCdf& g,
                              const ThresholdGrid& grid, DensityMode mode) {
  if (mode == DensityMode::masses) return bhattacharyya(cdf_to_masses(f, grid), cdf_to_masses(g, grid));
  grid.validate();
  double coefficient = 0.0;
  for (double y : grid.thresholds) coefficient += std::sqrt(f.eval(y) * g.eval(y));
  coefficient *= grid.spacing();
  return -std::log(std::max(coefficient, kLogFloor));
}

double kl_divergence(const EmpiricalCdf& f_true, const EmpiricalCdf& g_pred,
                     const ThresholdGrid& grid, DensityMode mode) {
  if (mode == DensityMode::masses) return kl(cdf_to_masses(f_true, grid), cdf_to_masses(g_pred, grid));
  grid.validate();
  double sum = 0.0;
  for (double y : grid.thresholds) {
    const double fy = f_true.eval(y);
    if (fy <= 0.0) continue;
    sum += fy * std::log(fy / std::max(g_pred.eval(y), kLogFloor));
  }
  return sum * grid.spacing();
}

double distance(DistanceKind kind, const EmpiricalCdf& f, const EmpiricalCdf& g,
                const ThresholdGrid& grid, DensityMode mode) {
  switch (kind) {
    case DistanceKind::l1_cdf:
    case DistanceKind::wasserstein1: return l1_cdf_distance(f, g, grid);
    case DistanceKind::bhattacharyya: return bhattacharyya_distance(f, g, grid, mode);
    case DistanceKind::kl: return kl_divergence(f, g, grid, mode);
  }
  throw std::invalid_argument("unknown distance kind");
}

}  // namespace cdfmatch

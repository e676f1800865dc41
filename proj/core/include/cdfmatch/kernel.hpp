#pragma once

#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "cdfmatch/types.hpp"

namespace cdfmatch {

enum class KernelKind { linear, polynomial, gaussian };

KernelKind parse_kernel_kind(std::string_view name);
std::string to_string(KernelKind kind);

/// Bounds of the tunable hyperparameters.
struct HyperBounds {
  static constexpr double kernel_scale_min = 1e-2;
  static constexpr double kernel_scale_max = 1e3;
  static constexpr double box_min = 1e-3;
  static constexpr double box_max = 1e3;
  static constexpr double epsilon_min = 1e-3;
  static constexpr double epsilon_max = 1.0;
};

inline constexpr int kPolynomialOrder = 3;

/// Model hyperparameters. `epsilon` is in the original target units and is
/// ignored by classifiers.
struct HyperParams {
  KernelKind kernel = KernelKind::gaussian;
  double kernel_scale = 1.0;
  double box_constraint = 1.0;
  double epsilon = 0.1;

  /// Throws std::invalid_argument when a value is non-finite or non-positive.
  void validate() const;
  /// True when every value lies inside HyperBounds.
  bool within_bounds(bool check_epsilon = true) const;

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

/// linear: x.z / s;  polynomial: (1 + x.z / s)^3;  gaussian: exp(-|x - z|^2 / s^2).
double kernel_eval(const HyperParams& h, std::span<const double> x, std::span<const double> z);

/// Kernel of two equally sized contiguous rows (no dimension check).
double kernel_rows(KernelKind kind, double scale, const double* x, const double* z,
                   Eigen::Index dim);

/// Dense Gram matrix of the rows of `X`.
Matrix gram_matrix(const HyperParams& h, const Matrix& X);

void to_json(nlohmann::json& j, const HyperParams& h);
void from_json(const nlohmann::json& j, HyperParams& h);

}  // namespace cdfmatch

#pragma once

#include <cstddef>
#include <vector>

#include "cdfmatch/types.hpp"

namespace cdfmatch {

/// Dual problem handed to the SMO solver:
///
///   min 0.5 a'Qa + p'a   s.t.  y'a = 0,  0 <= a_t <= C_t,  y_t in {-1, +1}
///
/// with Q_ts = y_t y_s K(base_t, base_s). Several variables may share one
/// Gram row (regression uses two per training point).
struct SmoProblem {
  std::vector<double> linear;     // p
  std::vector<signed char> sign;  // y
  std::vector<double> upper;      // C
  std::vector<std::size_t> base;  // variable -> Gram row
  const Matrix* gram = nullptr;

  std::size_t size() const { return linear.size(); }
  void validate() const;
};

struct SmoOptions {
  double tol = 1e-3;
  std::size_t max_iter = 100000;
};

struct SmoResult {
  std::vector<double> alpha;
  double rho = 0.0;  // decision offset: f(x) = sum_t y_t a_t K(x_t, x) - rho
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Sequential minimal optimization. The first variable is the maximal KKT
/// violator; its partner maximizes the second-order decrease of the
/// objective. Stops once the maximal violation falls below tol.
SmoResult solve_smo(const SmoProblem& problem, const SmoOptions& options);

}  // namespace cdfmatch

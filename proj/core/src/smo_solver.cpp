#include "cdfmatch/smo_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cdfmatch {

namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void SmoProblem::validate() const {
  const std::size_t l = linear.size();
  if (l == 0) throw std::invalid_argument("empty dual problem");
  if (sign.size() != l || upper.size() != l || base.size() != l)
    throw std::invalid_argument("dual problem arrays differ in length");
  if (gram == nullptr) throw std::invalid_argument("dual problem has no Gram matrix");
  for (std::size_t t = 0; t < l; ++t) {
    if (sign[t] != 1 && sign[t] != -1) throw std::invalid_argument("dual signs must be +-1");
    if (!(upper[t] > 0.0)) throw std::invalid_argument("dual upper bounds must be positive");
    if (base[t] >= static_cast<std::size_t>(gram->rows()))
      throw std::invalid_argument("dual variable maps outside the Gram matrix");
  }
}

SmoResult solve_smo(const SmoProblem& problem, const SmoOptions& options) {
  problem.validate();
  if (!(options.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");

  const std::size_t l = problem.size();
  const Matrix& K = *problem.gram;
  const auto& y = problem.sign;
  const auto& C = problem.upper;
  const auto& base = problem.base;

  auto Q = [&](std::size_t i, std::size_t j) {
    return static_cast<double>(y[i] * y[j]) * K(static_cast<Eigen::Index>(base[i]),
                                                 static_cast<Eigen::Index>(base[j]));
  };

  std::vector<double> alpha(l, 0.0);
  std::vector<double> G(problem.linear);
  std::vector<double> QD(l);
  for (std::size_t t = 0; t < l; ++t) QD[t] = Q(t, t);

  auto at_upper = [&](std::size_t t) { return alpha[t] >= C[t]; };
  auto at_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  SmoResult result;
  std::size_t iter = 0;
  bool converged = false;
  while (true) {
    // Maximal violating index in I_up.
    double gmax = -kInf;
    std::size_t i = l;
    for (std::size_t t = 0; t < l; ++t) {
      if (y[t] == 1) {
        if (!at_upper(t) && -G[t] >= gmax) { gmax = -G[t]; i = t; }
      } else {
        if (!at_lower(t) && G[t] >= gmax) { gmax = G[t]; i = t; }
      }
    }

    double gmax2 = -kInf;
    std::size_t j = l;
    double best_decrease = kInf;
    if (i < l) {
      for (std::size_t t = 0; t < l; ++t) {
        if (y[t] == 1) {
          if (at_lower(t)) continue;
          const double grad_diff = gmax + G[t];
          gmax2 = std::max(gmax2, G[t]);
          if (grad_diff > 0.0) {
            double quad = QD[i] + QD[t] - 2.0 * y[i] * Q(i, t);
            if (quad <= 0.0) quad = kTau;
            const double decrease = -(grad_diff * grad_diff) / quad;
            if (decrease <= best_decrease) { best_decrease = decrease; j = t; }
          }
        } else {
          if (at_upper(t)) continue;
          const double grad_diff = gmax - G[t];
          gmax2 = std::max(gmax2, -G[t]);
          if (grad_diff > 0.0) {
            double quad = QD[i] + QD[t] + 2.0 * y[i] * Q(i, t);
            if (quad <= 0.0) quad = kTau;
            const double decrease = -(grad_diff * grad_diff) / quad;
            if (decrease <= best_decrease) { best_decrease = decrease; j = t; }
          }
        }
      }
    }

    if (i == l || j == l || gmax + gmax2 < options.tol) {
      converged = true;
      break;
    }
    if (iter >= options.max_iter) break;
    ++iter;

    const double Ci = C[i];
    const double Cj = C[j];
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    const double Qij = Q(i, j);

    if (y[i] != y[j]) {
      double quad = QD[i] + QD[j] + 2.0 * Qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = -diff; }
      }
      if (diff > Ci - Cj) {
        if (alpha[i] > Ci) { alpha[i] = Ci; alpha[j] = Ci - diff; }
      } else {
        if (alpha[j] > Cj) { alpha[j] = Cj; alpha[i] = Cj + diff; }
      }
    } else {
      double quad = QD[i] + QD[j] - 2.0 * Qij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > Ci) {
        if (alpha[i] > Ci) { alpha[i] = Ci; alpha[j] = sum - Ci; }
      } else {
        if (alpha[j] < 0.0) { alpha[j] = 0.0; alpha[i] = sum; }
      }
      if (sum > Cj) {
        if (alpha[j] > Cj) { alpha[j] = Cj; alpha[i] = sum - Cj; }
      } else {
        if (alpha[i] < 0.0) { alpha[i] = 0.0; alpha[j] = sum; }
      }
    }

    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    const auto bi = static_cast<Eigen::Index>(base[i]);
    const auto bj = static_cast<Eigen::Index>(base[j]);
    const double si = y[i] * dai;
    const double sj = y[j] * daj;
    for (std::size_t t = 0; t < l; ++t) {
      const auto bt = static_cast<Eigen::Index>(base[t]);
      G[t] += y[t] * (si * K(bi, bt) + sj * K(bj, bt));
    }
  }

  // Offset from free variables, or the midpoint of the feasible interval.
  double ub = kInf, lb = -kInf, sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < l; ++t) {
    const double yG = y[t] * G[t];
    if (at_upper(t)) {
      if (y[t] == -1) ub = std::min(ub, yG); else lb = std::max(lb, yG);
    } else if (at_lower(t)) {
      if (y[t] == 1) ub = std::min(ub, yG); else lb = std::max(lb, yG);
    } else {
      ++n_free;
      sum_free += yG;
    }
  }
  result.rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

  double objective = 0.0;
  for (std::size_t t = 0; t < l; ++t) objective += alpha[t] * (G[t] + problem.linear[t]);
  result.objective = objective / 2.0;
  result.alpha = std::move(alpha);
  result.iterations = iter;
  result.converged = converged;
  return result;
}

}  // namespace cdfmatch

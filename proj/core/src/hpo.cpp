#include "cdfmatch/hpo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <nlohmann/json.hpp>

namespace cdfmatch {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lerp_log(double lo, double hi, double u) {
  return std::pow(10.0, lo + std::clamp(u, 0.0, 1.0) * (hi - lo));
}

using Point = std::vector<double>;

/// Gaussian-process regression on the unit cube with a Matern-5/2 kernel.
/// Observations are standardized; the isotropic length scale is picked from a
/// small ladder by marginal likelihood.
class Surrogate {
 public:
  Surrogate(const std::vector<Point>& xs, const std::vector<double>& ys) : xs_(xs) {
    const auto n = static_cast<Eigen::Index>(ys.size());
    Vector z = Eigen::Map<const Vector>(ys.data(), n);
    mean_ = z.mean();
    const double var = n > 1 ? (z.array() - mean_).square().sum() / static_cast<double>(n - 1) : 0.0;
    scale_ = var > 1e-24 ? std::sqrt(var) : 1.0;
    z_ = (z.array() - mean_) / scale_;

    double best_lml = -kInf;
    for (double ell : {0.05, 0.1, 0.2, 0.3, 0.5, 0.8, 1.5}) {
      Eigen::LLT<Eigen::MatrixXd> llt = factor(ell);
      if (llt.info() != Eigen::Success) continue;
      const Vector weights = llt.solve(z_);
      const double lml = -0.5 * z_.dot(weights) - llt.matrixLLT().diagonal().array().log().sum();
      if (lml > best_lml) {
        best_lml = lml;
        ell_ = ell;
        llt_ = llt;
        weights_ = weights;
      }
    }
    if (!std::isfinite(best_lml)) throw std::runtime_error("surrogate factorization failed");
  }

  /// Posterior mean and standard deviation on the standardized scale.
  std::pair<double, double> posterior(const Point& x) const {
    const auto n = static_cast<Eigen::Index>(xs_.size());
    Vector k(n);
    for (Eigen::Index i = 0; i < n; ++i) k[i] = kernel(x, xs_[static_cast<std::size_t>(i)], ell_);
    const double mu = k.dot(weights_);
    const Vector v = llt_.matrixL().solve(k);
    const double var = std::max(1.0 - v.squaredNorm(), 1e-18);
    return {mu, std::sqrt(var)};
  }

  double standardize(double y) const { return (y - mean_) / scale_; }

 private:
  static double kernel(const Point& a, const Point& b, double ell) {
    double r2 = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) r2 += (a[d] - b[d]) * (a[d] - b[d]);
    const double s = std::sqrt(5.0 * r2) / ell;
    return (1.0 + s + s * s / 3.0) * std::exp(-s);
  }

  Eigen::LLT<Eigen::MatrixXd> factor(double ell) const {
    const auto n = static_cast<Eigen::Index>(xs_.size());
    Eigen::MatrixXd K(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        K(i, j) = kernel(xs_[static_cast<std::size_t>(i)], xs_[static_cast<std::size_t>(j)], ell);
    K.diagonal().array() += 1e-6;
    return Eigen::LLT<Eigen::MatrixXd>(K);
  }

  std::vector<Point> xs_;
  Vector z_;
  double mean_ = 0.0;
  double scale_ = 1.0;
  double ell_ = 0.3;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Vector weights_;
};

double expected_improvement(double best, double mu, double sd) {
  constexpr double xi = 0.01;
  const double improvement = best - mu - xi;
  if (sd < 1e-12) return std::max(improvement, 0.0);
  const double z = improvement / sd;
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  return improvement * cdf + sd * pdf;
}

// Surrogate target: log compresses losses spanning several decades.
double surrogate_value(double total) { return std::log(total + 1e-9); }

struct Family {
  KernelKind kernel;
  std::size_t share = 0;
  std::size_t used = 0;
  std::vector<Point> design;
  std::vector<Point> xs;
  std::vector<double> totals;
};

std::vector<Point> latin_hypercube(std::size_t n, std::size_t dims, RandomEngine& eng) {
  std::vector<Point> pts(n, Point(dims));
  std::vector<std::size_t> perm(n);
  for (std::size_t d = 0; d < dims; ++d) {
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[eng.below(i)]);
    for (std::size_t i = 0; i < n; ++i)
      pts[i][d] = (static_cast<double>(perm[i]) + eng.uniform()) / static_cast<double>(n);
  }
  return pts;
}

Point random_point(std::size_t dims, RandomEngine& eng) {
  Point p(dims);
  for (auto& v : p) v = eng.uniform();
  return p;
}

Point propose(const Family& fam, std::size_t dims, std::size_t candidates, RandomEngine& eng) {
  std::vector<Point> xs;
  std::vector<double> ys;
  double worst = -kInf;
  for (double t : fam.totals)
    if (std::isfinite(t)) worst = std::max(worst, surrogate_value(t));
  if (!std::isfinite(worst)) return random_point(dims, eng);
  for (std::size_t i = 0; i < fam.xs.size(); ++i) {
    xs.push_back(fam.xs[i]);
    ys.push_back(std::isfinite(fam.totals[i]) ? surrogate_value(fam.totals[i]) : worst);
  }
  const Surrogate gp(xs, ys);
  const auto best_it = std::min_element(ys.begin(), ys.end());
  const double best = gp.standardize(*best_it);
  const Point& incumbent = xs[static_cast<std::size_t>(best_it - ys.begin())];

  Point chosen = random_point(dims, eng);
  double chosen_ei = -1.0;
  // Three quarters global screening, one quarter around the incumbent.
  const std::size_t local = candidates / 4;
  for (std::size_t c = 0; c < candidates; ++c) {
    Point p(dims);
    if (c < candidates - local) {
      for (auto& v : p) v = eng.uniform();
    } else {
      for (std::size_t d = 0; d < dims; ++d) p[d] = std::clamp(incumbent[d] + 0.05 * eng.normal(), 0.0, 1.0);
    }
    const auto [mu, sd] = gp.posterior(p);
    const double ei = expected_improvement(best, mu, sd);
    if (ei > chosen_ei) {
      chosen_ei = ei;
      chosen = std::move(p);
    }
  }
  return chosen;
}

}  // namespace

HyperParams SearchSpace::decode(KernelKind kernel, std::span<const double> unit) const {
  if (unit.size() != continuous_dims()) throw std::invalid_argument("unit point has the wrong dimension");
  HyperParams h;
  h.kernel = kernel;
  h.kernel_scale = std::clamp(lerp_log(kernel_scale_log10_min, kernel_scale_log10_max, unit[0]),
                              HyperBounds::kernel_scale_min, HyperBounds::kernel_scale_max);
  h.box_constraint = std::clamp(lerp_log(box_log10_min, box_log10_max, unit[1]),
                                HyperBounds::box_min, HyperBounds::box_max);
  h.epsilon = include_epsilon ? std::clamp(lerp_log(epsilon_log10_min, epsilon_log10_max, unit[2]),
                                           HyperBounds::epsilon_min, HyperBounds::epsilon_max)
                              : 0.0;
  return h;
}

bool SearchSpace::contains(const HyperParams& h) const {
  if (std::find(kernels.begin(), kernels.end(), h.kernel) == kernels.end()) return false;
  return h.within_bounds(include_epsilon);
}

Strategy parse_strategy(std::string_view name) {
  if (name == "smbo") return Strategy::smbo;
  if (name == "random") return Strategy::random;
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

std::string to_string(Strategy s) { return s == Strategy::smbo ? "smbo" : "random"; }

OptResult optimize(const Objective& objective, const SearchSpace& space, std::size_t budget,
                   Strategy strategy, RngStream rng, const OptimizerOptions& options) {
  if (budget < 5) throw std::invalid_argument("optimization budget must be at least 5");
  if (space.kernels.empty()) throw std::invalid_argument("search space has no kernel families");
  const std::size_t dims = space.continuous_dims();
  RandomEngine eng(rng);

  OptResult result;
  double best = kInf;
  auto evaluate = [&](KernelKind kernel, const Point& unit) {
    TrialRecord rec;
    rec.index = result.history.size();
    rec.theta = space.decode(kernel, unit);
    try {
      rec.breakdown = objective(rec.theta);
      rec.failed = !std::isfinite(rec.breakdown.total);
    } catch (const std::exception&) {
      rec.failed = true;
    }
    if (rec.failed) rec.breakdown.total = kInf;
    if (rec.breakdown.total < best) {
      best = rec.breakdown.total;
      result.best_theta = rec.theta;
    }
    rec.best_so_far = best;
    result.history.push_back(rec);
    return rec.breakdown.total;
  };

  const std::size_t nk = space.kernels.size();
  std::vector<Family> families(nk);
  for (std::size_t k = 0; k < nk; ++k) {
    families[k].kernel = space.kernels[k];
    families[k].share = budget / nk + (k < budget % nk ? 1 : 0);
  }

  if (strategy == Strategy::random) {
    for (std::size_t t = 0; t < budget; ++t) evaluate(space.kernels[t % nk], random_point(dims, eng));
  } else {
    std::size_t rounds = 0;
    for (auto& fam : families) {
      if (fam.share == 0) continue;
      const std::size_t n_init = std::clamp<std::size_t>(fam.share / 3, 1, std::min(options.max_initial, fam.share));
      fam.design = latin_hypercube(n_init, dims, eng);
      rounds = std::max(rounds, n_init);
    }
    for (std::size_t r = 0; r < rounds; ++r) {
      for (auto& fam : families) {
        if (r >= fam.design.size()) continue;
        fam.xs.push_back(fam.design[r]);
        fam.totals.push_back(evaluate(fam.kernel, fam.design[r]));
        ++fam.used;
      }
    }
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (auto& fam : families) {
        if (fam.used >= fam.share) continue;
        const Point p = propose(fam, dims, options.candidates, eng);
        fam.xs.push_back(p);
        fam.totals.push_back(evaluate(fam.kernel, p));
        ++fam.used;
        progressed = true;
      }
    }
  }

  if (!std::isfinite(best)) throw std::runtime_error("every optimization trial failed");
  result.best_loss = best;
  return result;
}

double interquartile_range(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("IQR of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  return quantile(0.75) - quantile(0.25);
}

HyperParams baseline_theta(std::span<const double> y, Task task) {
  if (y.empty()) throw std::invalid_argument("baseline needs training targets");
  HyperParams h;
  h.kernel = KernelKind::gaussian;
  h.kernel_scale = 1.0;
  h.box_constraint = 1.0;
  h.epsilon = task == Task::regression
                  ? std::clamp(interquartile_range(y) / 13.49, HyperBounds::epsilon_min, HyperBounds::epsilon_max)
                  : 0.0;
  return h;
}

void write_trials_csv(const OptResult& result, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "index,kernel,K,B,eps,data_loss,prob_loss,total,best_so_far\n";
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& t : result.history) {
    os << t.index << ',' << to_string(t.theta.kernel) << ',' << t.theta.kernel_scale << ','
       << t.theta.box_constraint << ',' << t.theta.epsilon << ',' << t.breakdown.data_loss << ','
       << t.breakdown.prob_loss << ',' << t.breakdown.total << ',' << t.best_so_far << '\n';
  }
}

namespace {

// JSON has no infinity; failed trials serialize as null.
nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

}  // namespace

void to_json(nlohmann::json& j, const TrialRecord& t) {
  nlohmann::json breakdown = t.breakdown;
  breakdown["total"] = finite_or_null(t.breakdown.total);
  j = {{"index", t.index},
       {"theta", t.theta},
       {"breakdown", breakdown},
       {"best_so_far", finite_or_null(t.best_so_far)},
       {"failed", t.failed}};
}

void to_json(nlohmann::json& j, const OptResult& r) {
  j = {{"best_theta", r.best_theta}, {"best_loss", r.best_loss}, {"history", r.history}};
}

}  // namespace cdfmatch

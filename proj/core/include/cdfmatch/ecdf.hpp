#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cdfmatch/distributions.hpp"
#include "cdfmatch/rng.hpp"
#include "cdfmatch/types.hpp"

namespace cdfmatch {

enum class Interpolation { step, linear };

/// Monotone CDF given by knots (y_k, p_k), strictly ascending in y.
///
/// Evaluation is 0 below the first knot and 1 at or above the last knot.
/// Between knots the value is either the left knot's p (step) or a linear
/// blend toward the right knot's p (linear). At a knot it is always p_k, so
/// a CDF built from data reproduces the counting definition exactly there.
class EmpiricalCdf {
 public:
  EmpiricalCdf() = default;

  /// Validates and adopts explicit knots. Throws std::invalid_argument.
  static EmpiricalCdf from_knots(std::vector<double> ys, std::vector<double> ps,
                                 Interpolation mode = Interpolation::linear);

  double operator()(double y) const { return eval(y); }
  double eval(double y) const;

  const std::vector<double>& ys() const { return ys_; }
  const std::vector<double>& ps() const { return ps_; }
  std::size_t size() const { return ys_.size(); }
  bool empty() const { return ys_.empty(); }
  Interpolation interpolation() const { return mode_; }
  EmpiricalCdf with_interpolation(Interpolation mode) const;

  double support_min() const;
  double support_max() const;

  /// Two-column "y,p" CSV with round-trip precision.
  void write_csv(std::ostream& os) const;
  void save_csv(const std::string& path) const;
  static EmpiricalCdf read_csv(std::istream& is, Interpolation mode = Interpolation::linear);
  static EmpiricalCdf load_csv(const std::string& path,
                               Interpolation mode = Interpolation::linear);

 private:
  std::vector<double> ys_;
  std::vector<double> ps_;
  Interpolation mode_ = Interpolation::linear;
};

/// Empirical CDF of `values`: p at each distinct value = fraction of values <= it.
/// Throws std::invalid_argument("no observations") on empty input and on non-finite values.
EmpiricalCdf ecdf_build(std::span<const double> values,
                        Interpolation mode = Interpolation::linear);

inline double ecdf_eval(const EmpiricalCdf& cdf, double y) { return cdf.eval(y); }

/// Batched model: maps an input matrix (one row per sample) to outputs.
using BatchPredictor = std::function<Vector(const Matrix&)>;

/// Output CDF obtained by pushing an input sample through a model.
/// The sample itself is kept so it can double as a training design.
struct MonteCarloCdf {
  EmpiricalCdf cdf;
  Matrix inputs;
  Vector outputs;
};

/// Evaluates `predict` over row chunks (optionally on several threads) and
/// reassembles the outputs in row order. Result is independent of `workers`.
Vector predict_in_chunks(const BatchPredictor& predict, const Matrix& inputs,
                         std::size_t workers = 1);

/// Builds the output CDF of `predict` over the fixed `inputs`.
/// Throws std::runtime_error naming the number of non-finite outputs.
MonteCarloCdf cdf_from_inputs(const BatchPredictor& predict, Matrix inputs,
                              Interpolation mode = Interpolation::linear,
                              std::size_t workers = 1);

/// Plain Monte Carlo estimate of P(Y <= y) with X ~ dist. Requires sample_count >= 100.
MonteCarloCdf mc_cdf(const BatchPredictor& predict, const InputDistribution& dist,
                     std::size_t sample_count, RngStream rng,
                     Interpolation mode = Interpolation::linear, std::size_t workers = 1);

/// Strictly ascending set of thresholds used to discretize CDF comparisons.
struct ThresholdGrid {
  std::vector<double> thresholds;

  std::size_t size() const { return thresholds.size(); }
  /// Spacing between consecutive thresholds (grids built here are uniform).
  double spacing() const;
  void validate() const;
};

/// `count` equally spaced thresholds covering both supports plus a 5% margin
/// of the union width on each side; a zero-width union becomes [c - 1, c + 1].
ThresholdGrid make_grid(const EmpiricalCdf& target, const EmpiricalCdf& predicted,
                        std::size_t count = 100);

/// Uniform grid on [lower, upper].
ThresholdGrid uniform_grid(double lower, double upper, std::size_t count);

/// Largest absolute gap between `cdf` and `reference` over the knots of `cdf`
/// (both one-sided limits at each jump) and the given extra points.
double sup_gap(const EmpiricalCdf& cdf, const std::function<double(double)>& reference);

}  // namespace cdfmatch

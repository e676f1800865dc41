#include "cdfmatch/ecdf.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

namespace cdfmatch {

EmpiricalCdf EmpiricalCdf::from_knots(std::vector<double> ys, std::vector<double> ps,
                                      Interpolation mode) {
  if (ys.empty()) throw std::invalid_argument("empirical CDF needs at least one knot");
  if (ys.size() != ps.size()) throw std::invalid_argument("knot coordinate count mismatch");
  for (std::size_t k = 0; k < ys.size(); ++k) {
    if (!std::isfinite(ys[k]) || !std::isfinite(ps[k]))
      throw std::invalid_argument("knots must be finite");
    if (ps[k] < 0.0 || ps[k] > 1.0) throw std::invalid_argument("knot probability outside [0,1]");
    if (k > 0 && !(ys[k] > ys[k - 1]))
      throw std::invalid_argument("knots must be strictly ascending in y");
    if (k > 0 && ps[k] < ps[k - 1]) throw std::invalid_argument("knot probabilities must not decrease");
  }
  EmpiricalCdf cdf;
  cdf.ys_ = std::move(ys);
  cdf.ps_ = std::move(ps);
  cdf.mode_ = mode;
  return cdf;
}

double EmpiricalCdf::eval(double y) const {
  if (ys_.empty()) throw std::logic_error("evaluating an empty CDF");
  if (std::isnan(y)) return std::numeric_limits<double>::quiet_NaN();
  if (y < ys_.front()) return 0.0;
  if (y >= ys_.back()) return 1.0;
  // k = last knot with ys_[k] <= y; k + 1 exists because y < back().
  const auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
  const auto k = static_cast<std::size_t>(it - ys_.begin()) - 1;
  if (mode_ == Interpolation::step || y == ys_[k]) return ps_[k];
  const double t = (y - ys_[k]) / (ys_[k + 1] - ys_[k]);
  return ps_[k] + t * (ps_[k + 1] - ps_[k]);
}

EmpiricalCdf EmpiricalCdf::with_interpolation(Interpolation mode) const {
  EmpiricalCdf copy = *this;
  copy.mode_ = mode;
  return copy;
}

double EmpiricalCdf::support_min() const {
  if (ys_.empty()) throw std::logic_error("empty CDF has no support");
  return ys_.front();
}

double EmpiricalCdf::support_max() const {
  if (ys_.empty()) throw std::logic_error("empty CDF has no support");
  return ys_.back();
}

void EmpiricalCdf::write_csv(std::ostream& os) const {
  const auto old_precision = os.precision();
  os << "y,p\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t k = 0; k < ys_.size(); ++k) os << ys_[k] << ',' << ps_[k] << '\n';
  os.precision(old_precision);
}

void EmpiricalCdf::save_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_csv(os);
}

EmpiricalCdf EmpiricalCdf::read_csv(std::istream& is, Interpolation mode) {
  std::vector<double> ys, ps;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("CDF CSV line " + std::to_string(line_no) + ": expected 'y,p'");
    const std::string a = line.substr(0, comma);
    const std::string b = line.substr(comma + 1);
    if (line_no == 1 && a == "y") continue;  // header
    try {
      std::size_t pa = 0, pb = 0;
      const double y = std::stod(a, &pa);
      const double p = std::stod(b, &pb);
      if (pa != a.size() || pb != b.size()) throw std::invalid_argument("trailing characters");
      ys.push_back(y);
      ps.push_back(p);
    } catch (const std::exception&) {
      throw std::runtime_error("CDF CSV line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return from_knots(std::move(ys), std::move(ps), mode);
}

EmpiricalCdf EmpiricalCdf::load_csv(const std::string& path, Interpolation mode) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_csv(is, mode);
}

EmpiricalCdf ecdf_build(std::span<const double> values, Interpolation mode) {
  if (values.empty()) throw std::invalid_argument("no observations");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted)
    if (!std::isfinite(v)) throw std::invalid_argument("observations must be finite");
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<double> ys, ps;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    // Emit one knot per distinct value, at the last index of its run.
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    ys.push_back(sorted[i]);
    ps.push_back(static_cast<double>(i + 1) / n);
  }
  return EmpiricalCdf::from_knots(std::move(ys), std::move(ps), mode);
}

Vector predict_in_chunks(const BatchPredictor& predict, const Matrix& inputs, std::size_t workers) {
  const Eigen::Index rows = inputs.rows();
  Vector out(rows);
  if (rows == 0) return out;
  workers = std::max<std::size_t>(1, std::min<std::size_t>(workers, static_cast<std::size_t>(rows)));
  const Eigen::Index chunk = (rows + static_cast<Eigen::Index>(workers) - 1) /
                             static_cast<Eigen::Index>(workers);
  auto run_chunk = [&](Eigen::Index begin) {
    const Eigen::Index len = std::min(chunk, rows - begin);
    const Matrix block = inputs.middleRows(begin, len);
    const Vector part = predict(block);
    if (part.size() != len) throw std::runtime_error("predictor returned the wrong number of outputs");
    out.segment(begin, len) = part;
  };
  if (workers == 1) {
    run_chunk(0);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const Eigen::Index begin = static_cast<Eigen::Index>(w) * chunk;
    if (begin >= rows) break;
    pool.emplace_back([&, w, begin] {
      try {
        run_chunk(begin);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

MonteCarloCdf cdf_from_inputs(const BatchPredictor& predict, Matrix inputs, Interpolation mode,
                              std::size_t workers) {
  Vector outputs = predict_in_chunks(predict, inputs, workers);
  std::size_t bad = 0;
  for (Eigen::Index i = 0; i < outputs.size(); ++i)
    if (!std::isfinite(outputs[i])) ++bad;
  if (bad > 0)
    throw std::runtime_error("model produced " + std::to_string(bad) + " non-finite outputs");
  MonteCarloCdf result;
  result.cdf = ecdf_build(std::span<const double>(outputs.data(), static_cast<std::size_t>(outputs.size())), mode);
  result.inputs = std::move(inputs);
  result.outputs = std::move(outputs);
  return result;
}

MonteCarloCdf mc_cdf(const BatchPredictor& predict, const InputDistribution& dist,
                     std::size_t sample_count, RngStream rng, Interpolation mode,
                     std::size_t workers) {
  if (sample_count < 100) throw std::invalid_argument("Monte Carlo CDF needs at least 100 samples");
  return cdf_from_inputs(predict, sample(dist, sample_count, rng), mode, workers);
}

double ThresholdGrid::spacing() const {
  validate();
  return (thresholds.back() - thresholds.front()) / static_cast<double>(thresholds.size() - 1);
}

void ThresholdGrid::validate() const {
  if (thresholds.size() < 2) throw std::invalid_argument("threshold grid needs at least two points");
  for (std::size_t k = 1; k < thresholds.size(); ++k)
    if (!(thresholds[k] > thresholds[k - 1]))
      throw std::invalid_argument("thresholds must be strictly ascending");
}

ThresholdGrid uniform_grid(double lower, double upper, std::size_t count) {
  if (count < 2) throw std::invalid_argument("threshold grid needs at least two points");
  if (!(upper > lower)) throw std::invalid_argument("grid bounds must satisfy lower < upper");
  ThresholdGrid grid;
  grid.thresholds.resize(count);
  const double step = (upper - lower) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) grid.thresholds[k] = lower + step * static_cast<double>(k);
  grid.thresholds.back() = upper;
  return grid;
}

ThresholdGrid make_grid(const EmpiricalCdf& target, const EmpiricalCdf& predicted, std::size_t count) {
  if (count < 2) throw std::invalid_argument("threshold grid needs at least two points");
  const double lo = std::min(target.support_min(), predicted.support_min());
  const double hi = std::max(target.support_max(), predicted.support_max());
  const double width = hi - lo;
  if (!(width > 0.0)) return uniform_grid(lo - 1.0, hi + 1.0, count);
  const double margin = 0.05 * width;
  return uniform_grid(lo - margin, hi + margin, count);
}

double sup_gap(const EmpiricalCdf& cdf, const std::function<double(double)>& reference) {
  double gap = 0.0;
  const auto& ys = cdf.ys();
  for (std::size_t k = 0; k < ys.size(); ++k) {
    const double ref = reference(ys[k]);
    gap = std::max(gap, std::abs(cdf.eval(ys[k]) - ref));
    // Left limit at the jump.
    const double left = k == 0 ? 0.0 : (cdf.interpolation() == Interpolation::step ? cdf.ps()[k - 1]
                                                                                    : cdf.ps()[k]);
    gap = std::max(gap, std::abs(left - ref));
  }
  return gap;
}

}  // namespace cdfmatch

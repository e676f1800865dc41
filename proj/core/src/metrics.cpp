#include "cdfmatch/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdfmatch/image.hpp"

namespace cdfmatch {

double rmse(std::span<const double> y_true, std::span<const double> y_pred) {
  if (y_true.size() != y_pred.size()) throw std::invalid_argument("rmse: length mismatch");
  if (y_true.empty()) throw std::invalid_argument("rmse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double r = y_true[i] - y_pred[i];
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(y_true.size()));
}

namespace {

void check_same_shape(const GrayImage& a, const GrayImage& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw std::invalid_argument("images differ in size");
  if (a.size() == 0) throw std::invalid_argument("empty image");
}

}  // namespace

double psnr(const GrayImage& reference, const GrayImage& test, double peak) {
  check_same_shape(reference, test);
  if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be positive");
  double mse = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = reference.pixels()[i] - test.pixels()[i];
    mse += d * d;
  }
  mse /= static_cast<double>(reference.size());
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

double ssim(const GrayImage& reference, const GrayImage& test, double peak) {
  check_same_shape(reference, test);
  const std::size_t w = reference.width();
  const std::size_t h = reference.height();
  constexpr std::size_t win = kSsimWindow;
  if (w < win || h < win) throw std::invalid_argument("image is smaller than the SSIM window");

  // Summed-area tables of x, y, x^2, y^2 and xy with a zero border.
  const std::size_t stride = w + 1;
  std::vector<double> sx((h + 1) * stride, 0.0), sy(sx), sxx(sx), syy(sx), sxy(sx);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const double x = reference.at(r, c);
      const double y = test.at(r, c);
      const std::size_t i = (r + 1) * stride + (c + 1);
      const std::size_t up = r * stride + (c + 1);
      const std::size_t left = (r + 1) * stride + c;
      const std::size_t diag = r * stride + c;
      sx[i] = x + sx[up] + sx[left] - sx[diag];
      sy[i] = y + sy[up] + sy[left] - sy[diag];
      sxx[i] = x * x + sxx[up] + sxx[left] - sxx[diag];
      syy[i] = y * y + syy[up] + syy[left] - syy[diag];
      sxy[i] = x * y + sxy[up] + sxy[left] - sxy[diag];
    }
  }
  auto box = [&](const std::vector<double>& s, std::size_t r, std::size_t c) {
    const std::size_t r1 = r + win, c1 = c + win;
    return s[r1 * stride + c1] - s[r * stride + c1] - s[r1 * stride + c] + s[r * stride + c];
  };

  const double c1 = (0.01 * peak) * (0.01 * peak);
  const double c2 = (0.03 * peak) * (0.03 * peak);
  const double n = static_cast<double>(win * win);
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r + win <= h; ++r) {
    for (std::size_t c = 0; c + win <= w; ++c) {
      const double mx = box(sx, r, c) / n;
      const double my = box(sy, r, c) / n;
      const double vx = box(sxx, r, c) / n - mx * mx;
      const double vy = box(syy, r, c) / n - my * my;
      const double cxy = box(sxy, r, c) / n - mx * my;
      total += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
               ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++count;
    }
  }
  return total / static_cast<double>(count);
}

ConfusionMatrix confusion(std::span<const double> labels_true, std::span<const double> labels_pred) {
  if (labels_true.size() != labels_pred.size()) throw std::invalid_argument("confusion: length mismatch");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels_true.size(); ++i) {
    for (double v : {labels_true[i], labels_pred[i]})
      if (v != 0.0 && v != 1.0) throw std::invalid_argument("confusion: labels must be 0 or 1");
    const bool t = labels_true[i] == 1.0;
    const bool p = labels_pred[i] == 1.0;
    if (t && p) ++cm.tp;
    else if (!t && p) ++cm.fp;
    else if (t && !p) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

ClassificationReport report(const ConfusionMatrix& cm) {
  ClassificationReport r;
  r.accuracy = ratio(cm.tp + cm.tn, cm.total());
  r.precision = ratio(cm.tp, cm.tp + cm.fp);
  r.recall = ratio(cm.tp, cm.tp + cm.fn);
  r.f1 = harmonic(r.precision, r.recall);
  // Negative class viewed as positive.
  const double neg_precision = ratio(cm.tn, cm.tn + cm.fn);
  const double neg_recall = ratio(cm.tn, cm.tn + cm.fp);
  r.macro_precision = 0.5 * (r.precision + neg_precision);
  r.macro_recall = 0.5 * (r.recall + neg_recall);
  r.macro_f1 = 0.5 * (r.f1 + harmonic(neg_precision, neg_recall));
  return r;
}

void to_json(nlohmann::json& j, const ConfusionMatrix& cm) {
  j = {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

void to_json(nlohmann::json& j, const ClassificationReport& r) {
  j = {{"accuracy", r.accuracy},
       {"precision", r.precision},
       {"recall", r.recall},
       {"f1", r.f1},
       {"macro_precision", r.macro_precision},
       {"macro_recall", r.macro_recall},
       {"macro_f1", r.macro_f1}};
}

}  // namespace cdfmatch

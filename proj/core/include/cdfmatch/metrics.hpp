#pragma once

#include <cstddef>
#include <span>

#include <nlohmann/json_fwd.hpp>

namespace cdfmatch {

class GrayImage;

double rmse(std::span<const double> y_true, std::span<const double> y_pred);

/// PSNR value reported for identical images.
inline constexpr double kPsnrCap = 99.0;

/// 10 log10(peak^2 / MSE), capped at kPsnrCap.
double psnr(const GrayImage& reference, const GrayImage& test, double peak = 1.0);

inline constexpr std::size_t kSsimWindow = 8;

/// Mean SSIM over every 8x8 window (stride 1, uniform weights, population
/// moments), with C1 = (0.01 peak)^2 and C2 = (0.03 peak)^2.
double ssim(const GrayImage& reference, const GrayImage& test, double peak = 1.0);

/// Counts with "1" as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
};

struct ClassificationReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
};

ConfusionMatrix confusion(std::span<const double> labels_true, std::span<const double> labels_pred);
ClassificationReport report(const ConfusionMatrix& cm);

void to_json(nlohmann::json& j, const ConfusionMatrix& cm);
void to_json(nlohmann::json& j, const ClassificationReport& r);

}  // namespace cdfmatch

#include "cdfmatch/standardizer.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace cdfmatch {

namespace {

// Population moments, two-pass.
std::pair<double, double> mean_sd(const double* data, Eigen::Index n, Eigen::Index stride) {
  double mean = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) mean += data[i * stride];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = data[i * stride] - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / static_cast<double>(n))};
}

// Spread this small relative to the mean is treated as a constant column.
bool negligible(double sd, double mean) { return !(sd > 1e-12 * std::max(1.0, std::abs(mean))); }

}  // namespace

Standardizer Standardizer::fit_features(const Matrix& X) {
  if (X.rows() == 0) throw std::invalid_argument("cannot standardize an empty matrix");
  Standardizer s;
  s.feature_mean_.resize(X.cols());
  s.feature_sd_.resize(X.cols());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    auto [mean, sd] = mean_sd(X.data() + c, X.rows(), X.cols());
    s.feature_mean_[c] = mean;
    s.feature_sd_[c] = negligible(sd, mean) ? 0.0 : sd;
  }
  return s;
}

Standardizer Standardizer::fit(const Matrix& X, const Vector& y) {
  if (X.rows() != y.size()) throw std::invalid_argument("feature/target row count mismatch");
  Standardizer s = fit_features(X);
  auto [mean, sd] = mean_sd(y.data(), y.size(), 1);
  s.target_mean_ = mean;
  s.target_sd_ = negligible(sd, mean) ? 0.0 : sd;
  return s;
}

Matrix Standardizer::transform(const Matrix& X) const {
  if (X.cols() != feature_mean_.size())
    throw std::invalid_argument("feature dimension does not match the standardizer");
  Matrix Z(X.rows(), X.cols());
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const double sd = feature_sd_[c];
    if (sd > 0.0)
      Z.col(c) = (X.col(c).array() - feature_mean_[c]) / sd;
    else
      Z.col(c).setZero();
  }
  return Z;
}

Vector Standardizer::transform_target(const Vector& y) const {
  return (y.array() - target_mean_) / target_scale();
}

Vector Standardizer::inverse_target(const Vector& z) const {
  return (z.array() * target_scale()) + target_mean_;
}

void to_json(nlohmann::json& j, const Standardizer& s) {
  j = {{"feature_mean", std::vector<double>(s.feature_mean_.data(), s.feature_mean_.data() + s.feature_mean_.size())},
       {"feature_sd", std::vector<double>(s.feature_sd_.data(), s.feature_sd_.data() + s.feature_sd_.size())},
       {"target_mean", s.target_mean_},
       {"target_sd", s.target_sd_}};
}

void from_json(const nlohmann::json& j, Standardizer& s) {
  const auto mean = j.at("feature_mean").get<std::vector<double>>();
  const auto sd = j.at("feature_sd").get<std::vector<double>>();
  if (mean.size() != sd.size()) throw std::invalid_argument("standardizer vectors differ in length");
  s.feature_mean_ = Eigen::Map<const Vector>(mean.data(), static_cast<Eigen::Index>(mean.size()));
  s.feature_sd_ = Eigen::Map<const Vector>(sd.data(), static_cast<Eigen::Index>(sd.size()));
  s.target_mean_ = j.at("target_mean").get<double>();
  s.target_sd_ = j.at("target_sd").get<double>();
}

}  // namespace cdfmatch

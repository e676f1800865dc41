#include "cdfmatch/kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace cdfmatch {

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "linear") return KernelKind::linear;
  if (name == "polynomial") return KernelKind::polynomial;
  if (name == "gaussian" || name == "rbf") return KernelKind::gaussian;
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

std::string to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::linear: return "linear";
    case KernelKind::polynomial: return "polynomial";
    case KernelKind::gaussian: return "gaussian";
  }
  return "unknown";
}

void HyperParams::validate() const {
  if (!std::isfinite(kernel_scale) || kernel_scale <= 0.0)
    throw std::invalid_argument("kernel scale must be positive");
  if (!std::isfinite(box_constraint) || box_constraint <= 0.0)
    throw std::invalid_argument("box constraint must be positive");
  if (!std::isfinite(epsilon) || epsilon < 0.0)
    throw std::invalid_argument("epsilon must be non-negative");
}

bool HyperParams::within_bounds(bool check_epsilon) const {
  using B = HyperBounds;
  const bool ok = kernel_scale >= B::kernel_scale_min && kernel_scale <= B::kernel_scale_max &&
                  box_constraint >= B::box_min && box_constraint <= B::box_max;
  if (!check_epsilon) return ok;
  return ok && epsilon >= B::epsilon_min && epsilon <= B::epsilon_max;
}

double kernel_rows(KernelKind kind, double scale, const double* x, const double* z,
                   Eigen::Index dim) {
  const Eigen::Map<const Eigen::VectorXd> a(x, dim);
  const Eigen::Map<const Eigen::VectorXd> b(z, dim);
  switch (kind) {
    case KernelKind::linear: return a.dot(b) / scale;
    case KernelKind::polynomial: {
      const double base = 1.0 + a.dot(b) / scale;
      return base * base * base;
    }
    case KernelKind::gaussian: return std::exp(-(a - b).squaredNorm() / (scale * scale));
  }
  return 0.0;
}

double kernel_eval(const HyperParams& h, std::span<const double> x, std::span<const double> z) {
  if (x.size() != z.size()) throw std::invalid_argument("kernel arguments differ in dimension");
  if (!(h.kernel_scale > 0.0)) throw std::invalid_argument("kernel scale must be positive");
  return kernel_rows(h.kernel, h.kernel_scale, x.data(), z.data(),
                     static_cast<Eigen::Index>(x.size()));
}

Matrix gram_matrix(const HyperParams& h, const Matrix& X) {
  const Eigen::Index n = X.rows();
  Matrix K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = kernel_rows(h.kernel, h.kernel_scale, X.row(i).data(), X.row(j).data(), X.cols());
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

void to_json(nlohmann::json& j, const HyperParams& h) {
  j = {{"kernel", to_string(h.kernel)},
       {"kernel_scale", h.kernel_scale},
       {"box_constraint", h.box_constraint},
       {"epsilon", h.epsilon}};
}

void from_json(const nlohmann::json& j, HyperParams& h) {
  h.kernel = parse_kernel_kind(j.at("kernel").get<std::string>());
  h.kernel_scale = j.at("kernel_scale").get<double>();
  h.box_constraint = j.at("box_constraint").get<double>();
  h.epsilon = j.value("epsilon", 0.0);
  h.validate();
}

}  // namespace cdfmatch

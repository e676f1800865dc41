#include "cdfmatch/svm.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdfmatch/smo_solver.hpp"

namespace cdfmatch {

namespace {

void require_finite(const Matrix& X, const char* what) {
  if (!X.allFinite()) throw std::invalid_argument(std::string(what) + " contains non-finite values");
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw std::invalid_argument(std::string(what) + " contains non-finite values");
}

// Keeps the rows with a non-zero coefficient.
void compact(KernelExpansion& m, const Matrix& Z, const std::vector<double>& coef) {
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < coef.size(); ++i)
    if (coef[i] != 0.0) keep.push_back(static_cast<Eigen::Index>(i));
  m.support_vectors.resize(static_cast<Eigen::Index>(keep.size()), Z.cols());
  m.coefficients.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    m.support_vectors.row(static_cast<Eigen::Index>(k)) = Z.row(keep[k]);
    m.coefficients[static_cast<Eigen::Index>(k)] = coef[static_cast<std::size_t>(keep[k])];
  }
}

}  // namespace

Vector KernelExpansion::expansion(const Matrix& Z) const {
  const Eigen::Index n_sv = support_vectors.rows();
  Vector out(Z.rows());
  for (Eigen::Index r = 0; r < Z.rows(); ++r) {
    double sum = 0.0;
    for (Eigen::Index s = 0; s < n_sv; ++s)
      sum += coefficients[s] * kernel_rows(hyperparams.kernel, hyperparams.kernel_scale,
                                           support_vectors.row(s).data(), Z.row(r).data(), Z.cols());
    out[r] = sum + bias;
  }
  return out;
}

Vector SvrModel::predict(const Matrix& X) const {
  if (X.cols() != dimension()) throw std::invalid_argument("prediction input has the wrong dimension");
  return standardizer.inverse_target(expansion(standardizer.transform(X)));
}

Vector SvcModel::decision(const Matrix& X) const {
  if (X.cols() != dimension()) throw std::invalid_argument("decision input has the wrong dimension");
  return expansion(standardizer.transform(X));
}

Vector SvcModel::predict(const Matrix& X) const {
  Vector d = decision(X);
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = d[i] >= 0.0 ? 1.0 : -1.0;
  return d;
}

SvrModel svr_train(const Matrix& X, const Vector& y, const HyperParams& h, const TrainOptions& options) {
  h.validate();
  if (X.rows() < 2) throw std::invalid_argument("regression needs at least two samples");
  if (X.rows() != y.size()) throw std::invalid_argument("feature/target row count mismatch");
  require_finite(X, "features");
  require_finite(y, "targets");

  SvrModel model;
  model.hyperparams = h;
  model.standardizer = Standardizer::fit(X, y);
  const Matrix Z = model.standardizer.transform(X);
  const Vector t = model.standardizer.transform_target(y);
  const Matrix K = gram_matrix(h, Z);

  const auto n = static_cast<std::size_t>(X.rows());
  const double eps = h.epsilon / model.standardizer.target_scale();
  SmoProblem problem;
  problem.gram = &K;
  problem.linear.resize(2 * n);
  problem.sign.resize(2 * n);
  problem.upper.assign(2 * n, h.box_constraint);
  problem.base.resize(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = t[static_cast<Eigen::Index>(i)];
    problem.linear[i] = eps - ti;
    problem.sign[i] = 1;
    problem.base[i] = i;
    problem.linear[i + n] = eps + ti;
    problem.sign[i + n] = -1;
    problem.base[i + n] = i;
  }
  const SmoResult sol = solve_smo(problem, {options.tol, options.max_iter});

  std::vector<double> coef(n);
  for (std::size_t i = 0; i < n; ++i) coef[i] = sol.alpha[i] - sol.alpha[i + n];
  compact(model, Z, coef);
  model.bias = std::isfinite(sol.rho) ? -sol.rho : 0.0;
  model.converged = sol.converged;
  model.iterations = sol.iterations;
  return model;
}

Vector to_signed_labels(const Vector& labels01) {
  Vector out(labels01.size());
  for (Eigen::Index i = 0; i < labels01.size(); ++i) {
    if (labels01[i] != 0.0 && labels01[i] != 1.0) throw std::invalid_argument("labels must be 0 or 1");
    out[i] = labels01[i] == 1.0 ? 1.0 : -1.0;
  }
  return out;
}

SvcModel svc_train(const Matrix& X, const Vector& labels, const HyperParams& h,
                   const TrainOptions& options) {
  h.validate();
  if (X.rows() != labels.size()) throw std::invalid_argument("feature/label row count mismatch");
  if (X.rows() < 2) throw std::invalid_argument("classification needs at least two samples");
  require_finite(X, "features");
  bool has_pos = false, has_neg = false;
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1.0) has_pos = true;
    else if (labels[i] == -1.0) has_neg = true;
    else throw std::invalid_argument("labels must be -1 or +1");
  }
  if (!has_pos || !has_neg) throw std::invalid_argument("degenerate labels");

  SvcModel model;
  model.hyperparams = h;
  model.standardizer = Standardizer::fit_features(X);
  const Matrix Z = model.standardizer.transform(X);
  const Matrix K = gram_matrix(h, Z);

  const auto n = static_cast<std::size_t>(X.rows());
  SmoProblem problem;
  problem.gram = &K;
  problem.linear.assign(n, -1.0);
  problem.sign.resize(n);
  problem.upper.assign(n, h.box_constraint);
  problem.base.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    problem.sign[i] = labels[static_cast<Eigen::Index>(i)] > 0.0 ? 1 : -1;
    problem.base[i] = i;
  }
  const SmoResult sol = solve_smo(problem, {options.tol, options.max_iter});

  std::vector<double> coef(n);
  for (std::size_t i = 0; i < n; ++i) coef[i] = problem.sign[i] * sol.alpha[i];
  compact(model, Z, coef);
  model.bias = std::isfinite(sol.rho) ? -sol.rho : 0.0;
  model.converged = sol.converged;
  model.iterations = sol.iterations;
  return model;
}

namespace {

void expansion_to_json(nlohmann::json& j, const KernelExpansion& m, const char* type) {
  std::vector<std::vector<double>> svs;
  for (Eigen::Index r = 0; r < m.support_vectors.rows(); ++r)
    svs.emplace_back(m.support_vectors.row(r).data(), m.support_vectors.row(r).data() + m.support_vectors.cols());
  j = {{"type", type},
       {"hyperparams", m.hyperparams},
       {"standardizer", m.standardizer},
       {"support_vectors", svs},
       {"coefficients", std::vector<double>(m.coefficients.data(), m.coefficients.data() + m.coefficients.size())},
       {"bias", m.bias},
       {"converged", m.converged},
       {"iterations", m.iterations}};
}

void expansion_from_json(const nlohmann::json& j, KernelExpansion& m, const char* type) {
  if (j.at("type").get<std::string>() != type)
    throw std::invalid_argument(std::string("model document is not of type ") + type);
  m.hyperparams = j.at("hyperparams").get<HyperParams>();
  m.standardizer = j.at("standardizer").get<Standardizer>();
  const auto svs = j.at("support_vectors").get<std::vector<std::vector<double>>>();
  const auto coef = j.at("coefficients").get<std::vector<double>>();
  if (svs.size() != coef.size()) throw std::invalid_argument("support vector/coefficient count mismatch");
  const Eigen::Index dim = m.standardizer.dimension();
  m.support_vectors.resize(static_cast<Eigen::Index>(svs.size()), dim);
  for (std::size_t r = 0; r < svs.size(); ++r) {
    if (static_cast<Eigen::Index>(svs[r].size()) != dim)
      throw std::invalid_argument("support vector has the wrong dimension");
    for (Eigen::Index c = 0; c < dim; ++c) m.support_vectors(static_cast<Eigen::Index>(r), c) = svs[r][static_cast<std::size_t>(c)];
  }
  m.coefficients = Eigen::Map<const Vector>(coef.data(), static_cast<Eigen::Index>(coef.size()));
  m.bias = j.at("bias").get<double>();
  m.converged = j.value("converged", true);
  m.iterations = j.value("iterations", std::size_t{0});
}

}  // namespace

void to_json(nlohmann::json& j, const SvrModel& m) { expansion_to_json(j, m, "svr"); }
void from_json(const nlohmann::json& j, SvrModel& m) { expansion_from_json(j, m, "svr"); }
void to_json(nlohmann::json& j, const SvcModel& m) { expansion_to_json(j, m, "svc"); }
void from_json(const nlohmann::json& j, SvcModel& m) { expansion_from_json(j, m, "svc"); }

}  // namespace cdfmatch

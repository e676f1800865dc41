#include "cdfmatch/distributions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace cdfmatch {

Marginal Marginal::uniform(double lower, double upper) {
  Marginal m{Kind::uniform, lower, upper};
  m.validate();
  return m;
}

Marginal Marginal::normal(double mean, double sd) {
  Marginal m{Kind::normal, mean, sd};
  m.validate();
  return m;
}

void Marginal::validate() const {
  if (!std::isfinite(first) || !std::isfinite(second))
    throw std::invalid_argument("marginal parameters must be finite");
  if (kind == Kind::uniform && !(first < second))
    throw std::invalid_argument("uniform marginal requires lower < upper");
  if (kind == Kind::normal && second < 0.0)
    throw std::invalid_argument("normal marginal requires sd >= 0");
}

InputDistribution::InputDistribution(std::vector<Marginal> m) : marginals(std::move(m)) {
  validate();
}

void InputDistribution::validate() const {
  if (marginals.empty()) throw std::invalid_argument("input distribution needs at least one marginal");
  for (const auto& m : marginals) m.validate();
}

Matrix sample(const InputDistribution& dist, std::size_t count, RngStream rng) {
  dist.validate();
  if (count == 0) throw std::invalid_argument("sample count must be positive");
  const auto n = static_cast<Eigen::Index>(dist.dimension());
  Matrix out(static_cast<Eigen::Index>(count), n);
  RandomEngine engine(rng);
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const Marginal& m = dist.marginals[static_cast<std::size_t>(c)];
      out(r, c) = m.kind == Marginal::Kind::uniform ? engine.uniform(m.lower(), m.upper())
                                                    : engine.normal(m.mean(), m.sd());
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const Marginal& m) {
  if (m.kind == Marginal::Kind::uniform)
    j = {{"kind", "uniform"}, {"lower", m.lower()}, {"upper", m.upper()}};
  else
    j = {{"kind", "normal"}, {"mean", m.mean()}, {"sd", m.sd()}};
}

void from_json(const nlohmann::json& j, Marginal& m) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "uniform")
    m = Marginal::uniform(j.at("lower").get<double>(), j.at("upper").get<double>());
  else if (kind == "normal")
    m = Marginal::normal(j.at("mean").get<double>(), j.at("sd").get<double>());
  else
    throw std::invalid_argument("unknown marginal kind '" + kind + "'");
}

void to_json(nlohmann::json& j, const InputDistribution& d) { j = d.marginals; }

void from_json(const nlohmann::json& j, InputDistribution& d) {
  d = InputDistribution(j.get<std::vector<Marginal>>());
}

}  // namespace cdfmatch

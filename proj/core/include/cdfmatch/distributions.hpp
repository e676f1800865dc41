#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cdfmatch/rng.hpp"
#include "cdfmatch/types.hpp"

namespace cdfmatch {

/// One-dimensional input marginal.
struct Marginal {
  enum class Kind { uniform, normal };

  Kind kind = Kind::uniform;
  double first = 0.0;   // lower bound or mean
  double second = 1.0;  // upper bound or standard deviation

  static Marginal uniform(double lower, double upper);
  /// sd == 0 is a point mass at the mean.
  static Marginal normal(double mean, double sd);

  double lower() const { return first; }
  double upper() const { return second; }
  double mean() const { return first; }
  double sd() const { return second; }

  /// Throws std::invalid_argument when the parameters violate the kind's invariant.
  void validate() const;

  friend bool operator==(const Marginal&, const Marginal&) = default;
};

/// Product of independent marginals, one per input dimension.
struct InputDistribution {
  std::vector<Marginal> marginals;

  InputDistribution() = default;
  explicit InputDistribution(std::vector<Marginal> m);

  std::size_t dimension() const { return marginals.size(); }
  void validate() const;
};

/// Draws `count` rows; column j follows marginal j. Row-major draw order.
Matrix sample(const InputDistribution& dist, std::size_t count, RngStream rng);

void to_json(nlohmann::json& j, const Marginal& m);
void from_json(const nlohmann::json& j, Marginal& m);
void to_json(nlohmann::json& j, const InputDistribution& d);
void from_json(const nlohmann::json& j, InputDistribution& d);

}  // namespace cdfmatch

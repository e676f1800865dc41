#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cdfmatch/cdf_distance.hpp"
#include "cdfmatch/ecdf.hpp"
#include "cdfmatch/rng.hpp"

using namespace cdfmatch;

namespace {

DiscreteMasses masses(std::vector<double> m) { return DiscreteMasses{std::move(m)}; }

EmpiricalCdf unit_step(double at) { return ecdf_build(std::vector<double>{at}, Interpolation::step); }

EmpiricalCdf uniform_cdf(double lo, double hi) {
  return EmpiricalCdf::from_knots({lo, hi}, {0.0, 1.0}, Interpolation::linear);
}

}  // namespace

TEST_CASE("cdf_to_masses: examples and normalization") {
  const auto step = unit_step(0.5);
  const auto m1 = cdf_to_masses(step, ThresholdGrid{{0.0, 1.0}});
  REQUIRE(m1.size() == 3);
  CHECK(m1.masses[0] == 0.0);
  CHECK(m1.masses[1] == 1.0);
  CHECK(m1.masses[2] == 0.0);

  const auto m2 = cdf_to_masses(uniform_cdf(0, 1), ThresholdGrid{{0.0, 0.5, 1.0}});
  REQUIRE(m2.size() == 4);
  CHECK(m2.masses[0] == doctest::Approx(0.0));
  CHECK(m2.masses[1] == doctest::Approx(0.5));
  CHECK(m2.masses[2] == doctest::Approx(0.5));
  CHECK(m2.masses[3] == doctest::Approx(0.0));

  RandomEngine eng({3, 3});
  std::vector<double> v(300);
  for (auto& x : v) x = eng.normal();
  const auto cdf = ecdf_build(v);
  const auto m3 = cdf_to_masses(cdf, uniform_grid(-1.0, 1.0, 17));
  double sum = 0.0;
  for (double p : m3.masses) {
    CHECK(p >= 0.0);
    sum += p;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bhattacharyya on explicit masses") {
  CHECK(bhattacharyya(masses({0.3, 0.7}), masses({0.3, 0.7})) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(bhattacharyya(masses({1, 0}), masses({0, 1})) == doctest::Approx(-std::log(1e-12)).epsilon(1e-12));
  CHECK(bhattacharyya(masses({1, 0}), masses({0, 1})) == doctest::Approx(27.631).epsilon(1e-4));
  // Oracle: the coefficient evaluated by hand.
  const double expected = -std::log(std::sqrt(0.5 * 0.9) + std::sqrt(0.5 * 0.1));
  CHECK(bhattacharyya(masses({0.5, 0.5}), masses({0.9, 0.1})) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(bhattacharyya(masses({0.5, 0.5}), masses({0.9, 0.1})) - 0.1116) <= 1e-4);
  CHECK_THROWS_AS(bhattacharyya(masses({1}), masses({0.5, 0.5})), std::invalid_argument);
}

TEST_CASE("kl on explicit masses") {
  CHECK(kl(masses({0.2, 0.8}), masses({0.2, 0.8})) == doctest::Approx(0.0).epsilon(1e-12));
  const double expected = 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0);
  CHECK(kl(masses({0.5, 0.5}), masses({0.25, 0.75})) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(kl(masses({0.5, 0.5}), masses({0.25, 0.75})) - 0.1438) <= 1e-4);
  CHECK(kl(masses({1, 0}), masses({0.5, 0.5})) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(kl(masses({0.5, 0.5}), masses({1, 0})) > 10.0);  // floored, finite
  CHECK(std::isfinite(kl(masses({0.5, 0.5}), masses({1, 0}))));
}

TEST_CASE("l1_cdf: shifted uniforms and offset steps") {
  const auto f = uniform_cdf(0.0, 1.0);
  const auto g = uniform_cdf(0.25, 1.25);
  const auto grid = make_grid(f, g, 400);
  CHECK(std::abs(l1_cdf_distance(f, g, grid) - 0.25) <= 0.01);

  const auto s0 = unit_step(0.0);
  const auto s1 = unit_step(1.0);
  const auto span = uniform_grid(-0.1, 1.1, 121);
  CHECK(std::abs(l1_cdf_distance(s0, s1, span) - 1.0) <= 0.02);
  CHECK(l1_cdf_raw_sum(s0, s1, span) == doctest::Approx(l1_cdf_distance(s0, s1, span) / span.spacing()));
}

TEST_CASE("l1_cdf converges to the integral as the grid is refined") {
  const auto f = uniform_cdf(0.0, 1.0);
  const auto g = uniform_cdf(0.3, 2.0);
  // Reference: midpoint rule with two million cells over the whole support.
  const double exact = [] {
    double s = 0.0;
    const int n = 2000000;
    for (int i = 0; i < n; ++i) {
      const double y = -0.5 + 3.0 * (i + 0.5) / n;
      const double fy = std::clamp(y, 0.0, 1.0);
      const double gy = std::clamp((y - 0.3) / 1.7, 0.0, 1.0);
      s += std::abs(fy - gy) * 3.0 / n;
    }
    return s;
  }();
  std::vector<double> errors;
  for (std::size_t k : {25, 100, 400, 1600}) errors.push_back(std::abs(l1_cdf_distance(f, g, make_grid(f, g, k)) - exact));
  CHECK(errors.back() < errors.front());
  CHECK(errors.back() <= 1e-3 * exact);
  // Successive refinements agree ever more closely.
  const double coarse = std::abs(l1_cdf_distance(f, g, make_grid(f, g, 25)) - l1_cdf_distance(f, g, make_grid(f, g, 1600)));
  const double fine = std::abs(l1_cdf_distance(f, g, make_grid(f, g, 800)) - l1_cdf_distance(f, g, make_grid(f, g, 1600)));
  CHECK(fine < coarse);
}

TEST_CASE("every distance vanishes on identical CDFs") {
  RandomEngine eng({1, 4});
  std::vector<double> v(500);
  for (auto& x : v) x = eng.uniform(-2.0, 7.0);
  const auto cdf = ecdf_build(v);
  const auto grid = make_grid(cdf, cdf, 100);
  for (auto kind : {DistanceKind::l1_cdf, DistanceKind::bhattacharyya, DistanceKind::kl, DistanceKind::wasserstein1}) {
    CHECK(std::abs(distance(kind, cdf, cdf, grid)) <= 1e-12);
  }
}

TEST_CASE("distance dispatch and properties") {
  const auto f = uniform_cdf(0.0, 1.0);
  const auto g = uniform_cdf(0.2, 1.5);
  const auto grid = make_grid(f, g, 100);
  CHECK(distance(DistanceKind::wasserstein1, f, g, grid) == distance(DistanceKind::l1_cdf, f, g, grid));
  CHECK(distance(DistanceKind::bhattacharyya, f, g, grid) == bhattacharyya_distance(f, g, grid));
  CHECK(distance(DistanceKind::kl, f, g, grid) == kl_divergence(f, g, grid));
  // Symmetric distances stay symmetric, KL is directional.
  CHECK(bhattacharyya_distance(f, g, grid) == doctest::Approx(bhattacharyya_distance(g, f, grid)).epsilon(1e-12));
  CHECK(l1_cdf_distance(f, g, grid) == doctest::Approx(l1_cdf_distance(g, f, grid)).epsilon(1e-12));
  CHECK(kl_divergence(f, g, grid) != doctest::Approx(kl_divergence(g, f, grid)));
  for (auto kind : {DistanceKind::l1_cdf, DistanceKind::bhattacharyya, DistanceKind::kl}) CHECK(distance(kind, f, g, grid) > 0.0);
}

TEST_CASE("distance names parse and print") {
  CHECK(parse_distance_kind("l1") == DistanceKind::l1_cdf);
  CHECK(parse_distance_kind("l1_cdf") == DistanceKind::l1_cdf);
  CHECK(parse_distance_kind("bhattacharyya") == DistanceKind::bhattacharyya);
  CHECK(parse_distance_kind("kl") == DistanceKind::kl);
  CHECK(parse_distance_kind("wasserstein1") == DistanceKind::wasserstein1);
  for (auto kind : {DistanceKind::l1_cdf, DistanceKind::bhattacharyya, DistanceKind::kl, DistanceKind::wasserstein1})
    CHECK(parse_distance_kind(to_string(kind)) == kind);
  CHECK_THROWS_AS(parse_distance_kind("hellinger"), std::invalid_argument);
}

TEST_CASE("literal CDF mode evaluates the integral forms on the CDF values") {
  const auto f = uniform_cdf(0.0, 1.0);
  const auto g = uniform_cdf(0.1, 1.2);
  const auto grid = uniform_grid(-0.5, 1.5, 41);
  double bc = 0.0, kl_sum = 0.0;
  for (double y : grid.thresholds) {
    const double fy = std::clamp(y, 0.0, 1.0);
    const double gy = std::clamp((y - 0.1) / 1.1, 0.0, 1.0);
    bc += std::sqrt(fy * gy);
    if (fy > 0.0) kl_sum += fy * std::log(fy / std::max(gy, kLogFloor));
  }
  CHECK(bhattacharyya_distance(f, g, grid, DensityMode::literal_cdf) ==
        doctest::Approx(-std::log(bc * grid.spacing())).epsilon(1e-12));
  CHECK(kl_divergence(f, g, grid, DensityMode::literal_cdf) == doctest::Approx(kl_sum * grid.spacing()).epsilon(1e-12));
  CHECK(kl_divergence(f, f, grid, DensityMode::literal_cdf) == 0.0);
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "cdfmatch/distributions.hpp"
#include "cdfmatch/ecdf.hpp"
#include "cdfmatch/rng.hpp"

using namespace cdfmatch;

namespace {

// Fraction of observations <= y, counted directly.
double brute_force(const std::vector<double>& values, double y) {
  const auto hits = std::count_if(values.begin(), values.end(), [&](double v) { return v <= y; });
  return static_cast<double>(hits) / static_cast<double>(values.size());
}

double triangular_cdf(double y) {
  if (y <= 0.0) return 0.0;
  if (y <= 1.0) return 0.5 * y * y;
  if (y <= 2.0) return 1.0 - 0.5 * (2.0 - y) * (2.0 - y);
  return 1.0;
}

}  // namespace

TEST_CASE("ecdf_build: small hand-checked cases") {
  const std::vector<double> v{1, 2, 3};
  const auto cdf = ecdf_build(v, Interpolation::step);
  CHECK(cdf.eval(2.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const std::vector<double> single{5};
  const auto one = ecdf_build(single);
  CHECK(one.eval(4.9) == 0.0);
  CHECK(one.eval(5.0) == 1.0);
  CHECK(one.eval(-1e9) == 0.0);
  CHECK(one.eval(1e9) == 1.0);
}

TEST_CASE("ecdf_build: ties collapse into one knot with the cumulative share") {
  const std::vector<double> v{2, 1, 2, 2};
  const auto cdf = ecdf_build(v, Interpolation::step);
  REQUIRE(cdf.size() == 2);
  CHECK(cdf.ps()[0] == doctest::Approx(0.25));
  CHECK(cdf.ps()[1] == 1.0);
}

TEST_CASE("step ECDF matches brute-force counting on random data") {
  RandomEngine eng({2024, 1});
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + eng.below(20);
    std::vector<double> values(n);
    for (auto& v : values) v = std::round(eng.uniform(-5.0, 5.0) * 4.0) / 4.0;  // force some ties
    const auto cdf = ecdf_build(values, Interpolation::step);
    for (int q = 0; q < 50; ++q) {
      const double y = eng.uniform(-6.0, 6.0);
      REQUIRE(cdf.eval(y) == doctest::Approx(brute_force(values, y)).epsilon(1e-14));
    }
    for (double v : values) REQUIRE(cdf.eval(v) == brute_force(values, v));
  }
}

TEST_CASE("linear interpolation between knots and clamping outside") {
  const auto cdf = EmpiricalCdf::from_knots({0.0, 1.0}, {0.0, 1.0}, Interpolation::linear);
  CHECK(cdf.eval(0.25) == doctest::Approx(0.25));
  CHECK(cdf.eval(-1e9) == 0.0);
  CHECK(cdf.eval(1e9) == 1.0);

  // Linear and step modes agree at knots.
  const std::vector<double> v{0.3, 1.1, 2.5, 2.6};
  const auto step = ecdf_build(v, Interpolation::step);
  const auto lin = step.with_interpolation(Interpolation::linear);
  for (double y : v) CHECK(step.eval(y) == lin.eval(y));
}

TEST_CASE("ECDF values are monotone and bounded") {
  RandomEngine eng({5, 5});
  std::vector<double> v(200);
  for (auto& x : v) x = eng.normal();
  for (auto mode : {Interpolation::step, Interpolation::linear}) {
    const auto cdf = ecdf_build(v, mode);
    double prev = 0.0;
    for (double y = -5.0; y <= 5.0; y += 0.01) {
      const double p = cdf.eval(y);
      REQUIRE(p >= prev);
      REQUIRE(p <= 1.0);
      prev = p;
    }
  }
}

TEST_CASE("ECDF error paths") {
  CHECK_THROWS_WITH_AS(ecdf_build(std::vector<double>{}), "no observations", std::invalid_argument);
  CHECK_THROWS_AS(ecdf_build(std::vector<double>{1.0, NAN}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalCdf::from_knots({1.0, 0.0}, {0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalCdf::from_knots({0.0, 1.0}, {0.7, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalCdf::from_knots({0.0}, {1.5}), std::invalid_argument);
}

TEST_CASE("CSV round trip is exact") {
  RandomEngine eng({9, 9});
  std::vector<double> v(57);
  for (auto& x : v) x = eng.normal(3.0, 2.0);
  const auto cdf = ecdf_build(v);
  std::stringstream ss;
  cdf.write_csv(ss);
  const auto back = EmpiricalCdf::read_csv(ss);
  CHECK(back.ys() == cdf.ys());
  CHECK(back.ps() == cdf.ps());

  std::stringstream bad("y,p\n1.0,0.5\nnot-a-number,1\n");
  CHECK_THROWS(EmpiricalCdf::read_csv(bad));
}

TEST_CASE("mc_cdf: constant predictor gives a unit step") {
  const InputDistribution d({Marginal::uniform(0, 1)});
  const auto mc = mc_cdf([](const Matrix& X) { return Vector::Constant(X.rows(), 4.2); }, d, 500, {1, 1});
  REQUIRE(mc.cdf.size() == 1);
  CHECK(mc.cdf.eval(4.19) == 0.0);
  CHECK(mc.cdf.eval(4.2) == 1.0);
}

TEST_CASE("mc_cdf: identity on U(0,1) recovers F(y) = y") {
  const InputDistribution d({Marginal::uniform(0, 1)});
  const auto mc = mc_cdf([](const Matrix& X) { return Vector(X.col(0)); }, d, 100000, {3, 7},
                         Interpolation::step);
  CHECK(sup_gap(mc.cdf, [](double y) { return std::clamp(y, 0.0, 1.0); }) <= 0.01);
}

TEST_CASE("mc_cdf: sum of two uniforms matches the triangular CDF") {
  const InputDistribution d({Marginal::uniform(0, 1), Marginal::uniform(0, 1)});
  const auto mc = mc_cdf([](const Matrix& X) { return Vector(X.col(0) + X.col(1)); }, d, 100000, {4, 0},
                         Interpolation::step);
  CHECK(sup_gap(mc.cdf, triangular_cdf) <= 0.01);
}

TEST_CASE("mc_cdf: errors on non-finite outputs and tiny sample counts") {
  const InputDistribution d({Marginal::uniform(0, 1)});
  auto bad = [](const Matrix& X) {
    Vector v = X.col(0);
    v[0] = NAN;
    v[1] = INFINITY;
    return v;
  };
  CHECK_THROWS_WITH(mc_cdf(bad, d, 200, {1, 0}), doctest::Contains("2 non-finite"));
  CHECK_THROWS_AS(mc_cdf([](const Matrix& X) { return Vector(X.col(0)); }, d, 10, {1, 0}),
                  std::invalid_argument);
}

TEST_CASE("chunked prediction is independent of the worker count") {
  const Matrix X = sample(InputDistribution({Marginal::normal(0, 1), Marginal::normal(1, 2)}), 3001, {6, 6});
  auto f = [](const Matrix& A) { return Vector((A.col(0).array().sin() * A.col(1).array()).matrix()); };
  const Vector one = predict_in_chunks(f, X, 1);
  CHECK(one == predict_in_chunks(f, X, 3));
  CHECK(one == predict_in_chunks(f, X, 8));
}

TEST_CASE("make_grid: examples") {
  const auto unit = EmpiricalCdf::from_knots({0.0, 1.0}, {0.0, 1.0});
  const auto g3 = make_grid(unit, unit, 3);
  REQUIRE(g3.size() == 3);
  CHECK(g3.thresholds[0] == doctest::Approx(-0.05));
  CHECK(g3.thresholds[1] == doctest::Approx(0.5));
  CHECK(g3.thresholds[2] == doctest::Approx(1.05));

  const auto point = ecdf_build(std::vector<double>{2.5});
  const auto gp = make_grid(point, point, 5);
  CHECK(gp.thresholds.front() == doctest::Approx(1.5));
  CHECK(gp.thresholds.back() == doctest::Approx(3.5));

  const auto shifted = EmpiricalCdf::from_knots({2.0, 3.0}, {0.0, 1.0});
  const auto g11 = make_grid(unit, shifted, 11);
  CHECK(g11.thresholds.front() == doctest::Approx(-0.15));
  CHECK(g11.thresholds.back() == doctest::Approx(3.15));
  CHECK(g11.spacing() == doctest::Approx(0.33));

  CHECK_THROWS_AS(make_grid(unit, unit, 1), std::invalid_argument);
}

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "cdfmatch/cdf_distance.hpp"
#include "cdfmatch/distributions.hpp"
#include "cdfmatch/ecdf.hpp"
#include "cdfmatch/image.hpp"
#include "cdfmatch/metrics.hpp"
#include "cdfmatch/rng.hpp"
#include "cdfmatch/svm.hpp"

using namespace cdfmatch;

namespace {

void BM_EcdfBuild(benchmark::State& state) {
  RandomEngine eng({1, 0});
  std::vector<double> v(static_cast<std::size_t>(state.range(0)));
  for (auto& x : v) x = eng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(ecdf_build(v));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EcdfBuild)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_Distance(benchmark::State& state) {
  RandomEngine eng({2, 0});
  std::vector<double> a(10000), b(10000);
  for (auto& x : a) x = eng.normal();
  for (auto& x : b) x = eng.normal(0.3, 1.2);
  const auto f = ecdf_build(a), g = ecdf_build(b);
  const auto kind = static_cast<DistanceKind>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(distance(kind, f, g, make_grid(f, g, 100)));
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_Distance)->DenseRange(0, 3);

void BM_SvrTrain(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  RandomEngine eng({3, 0});
  Matrix X(n, 5);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < 5; ++c) X(i, c) = eng.uniform();
    y[i] = std::sin(3 * X(i, 0)) + X(i, 1) * X(i, 2) + eng.normal(0.0, 0.1);
  }
  for (auto _ : state) benchmark::DoNotOptimize(svr_train(X, y, {KernelKind::gaussian, 1.0, 10.0, 0.05}));
}
BENCHMARK(BM_SvrTrain)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SvrPredictMonteCarlo(benchmark::State& state) {
  RandomEngine eng({4, 0});
  Matrix X(400, 5);
  Vector y(400);
  for (Eigen::Index i = 0; i < 400; ++i) {
    for (Eigen::Index c = 0; c < 5; ++c) X(i, c) = eng.uniform();
    y[i] = X.row(i).sum();
  }
  const SvrModel m = svr_train(X, y, {KernelKind::gaussian, 1.0, 10.0, 0.05});
  const InputDistribution d(std::vector<Marginal>(5, Marginal::uniform(0, 1)));
  for (auto _ : state)
    benchmark::DoNotOptimize(mc_cdf([&](const Matrix& Z) { return m.predict(Z); }, d, 10000, {5, 0}));
}
BENCHMARK(BM_SvrPredictMonteCarlo)->Unit(benchmark::kMillisecond);

void BM_Ssim(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const GrayImage a = synthetic_test_image(n, n);
  const GrayImage b = add_gaussian_noise(a, 0.1, {6, 0});
  for (auto _ : state) benchmark::DoNotOptimize(ssim(a, b));
}
BENCHMARK(BM_Ssim)->Arg(128)->Arg(256);

}  // namespace
BENCHMARK_MAIN();

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cdfmatch/experiments.hpp"
#include "cdfmatch/metrics.hpp"
#include "experiments_internal.hpp"

namespace cdfmatch {

void DenoiseConfig::validate() const {
  if (!(noise_sd >= 0.0)) throw std::invalid_argument("denoise: noise sd must be non-negative");
  if (patch < 3 || patch % 2 == 0) throw std::invalid_argument("denoise: patch size must be odd and >= 3");
  if (train_pixels < 2) throw std::invalid_argument("denoise: need at least two training pixels");
  if (mc_samples < 100) throw std::invalid_argument("denoise: need at least 100 evaluation patches");
  tuning.weights.validate();
}

namespace {

// First `count` entries of a seeded shuffle of all pixel positions.
std::vector<PixelIndex> random_pixels(const GrayImage& image, std::size_t count, RngStream rng) {
  const std::size_t total = image.size();
  count = std::min(count, total);
  std::vector<std::size_t> order(total);
  for (std::size_t i = 0; i < total; ++i) order[i] = i;
  RandomEngine eng(rng);
  for (std::size_t i = 0; i < count; ++i) std::swap(order[i], order[i + eng.below(total - i)]);
  std::vector<PixelIndex> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = {order[i] / image.width(), order[i] % image.width()};
  return out;
}

}  // namespace

ExperimentReport run_denoise(const DenoiseConfig& cfg, RngStream rng, const std::string& out_dir,
                             DenoiseOutputs* images) {
  cfg.validate();
  using detail::as_span;

  const GrayImage clean = cfg.image_path.empty() ? synthetic_test_image(cfg.synthetic_size, cfg.synthetic_size)
                                                 : load_pgm(cfg.image_path);
  if (clean.width() < 32 || clean.height() < 32) throw std::invalid_argument("denoise: image must be at least 32x32");
  const GrayImage noisy = add_gaussian_noise(clean, cfg.noise_sd, derive_stream(rng, 1));

  const auto train_px = random_pixels(clean, cfg.train_pixels, derive_stream(rng, 2));
  RegressionData train;
  train.X = extract_patches_at(noisy, cfg.patch, train_px);
  train.y.resize(static_cast<Eigen::Index>(train_px.size()));
  for (std::size_t i = 0; i < train_px.size(); ++i)
    train.y[static_cast<Eigen::Index>(i)] = clean.at(train_px[i].row, train_px[i].col);
  const EmpiricalCdf target = ecdf_build(as_span(train.y));

  const auto eval_px = random_pixels(noisy, cfg.mc_samples, derive_stream(rng, 3));
  const Matrix frozen = extract_patches_at(noisy, cfg.patch, eval_px);

  auto regimes = detail::run_regression_regimes(train, target, frozen, cfg.tuning, derive_stream(rng, 4));

  const PatchSet all = extract_patches(noisy, cfg.patch, 1);

  ExperimentReport report;
  report.experiment = "denoise";
  report.config = {{"image", cfg.image_path.empty() ? std::string("synthetic") : cfg.image_path},
                   {"width", clean.width()},
                   {"height", clean.height()},
                   {"noise_sd", cfg.noise_sd},
                   {"patch", cfg.patch},
                   {"train_pixels", train_px.size()},
                   {"eval_patches", eval_px.size()},
                   {"seed", rng.seed},
                   {"stream", rng.stream_id},
                   {"tuning", cfg.tuning}};

  const double noisy_psnr = psnr(clean, noisy);
  const double noisy_ssim = ssim(clean, noisy);
  report.extra = {{"noisy_psnr", noisy_psnr}, {"noisy_ssim", noisy_ssim}};

  DenoiseOutputs outputs{clean, noisy, {}};
  bool histories_ok = true;
  for (auto& regime : regimes) {
    RegimeResult res;
    res.name = regime.name;
    res.theta = regime.theta;
    res.history = regime.history;
    const Vector fit = regime.model.predict(train.X);
    res.train_metrics = {{"rmse", rmse(as_span(train.y), as_span(fit))},
                         {"converged", regime.model.converged},
                         {"support_vectors", regime.model.support_vectors.rows()}};
    const Vector pred = predict_in_chunks([&](const Matrix& X) { return regime.model.predict(X); },
                                          all.features, cfg.tuning.workers);
    std::vector<double> pixels(pred.data(), pred.data() + pred.size());
    const GrayImage denoised(clean.width(), clean.height(), std::move(pixels));
    const EmpiricalCdf predicted = ecdf_build(std::span<const double>(denoised.pixels()));
    const ThresholdGrid grid = make_grid(target, predicted, cfg.tuning.grid_size);
    res.cdf_distance = distance(cfg.tuning.distance, target, predicted, grid);
    res.test_metrics = {{"psnr", psnr(clean, denoised)},
                        {"ssim", ssim(clean, denoised)},
                        {"distances", detail::distance_table(target, predicted, cfg.tuning.grid_size)}};
    if (regime.history)
      histories_ok = histories_ok && detail::history_consistent(*regime.history, SearchSpace::regression(), cfg.tuning.budget);
    outputs.denoised.emplace_back(regime.name, denoised);
    report.regimes.push_back(std::move(res));
  }

  bool all_better = true;
  for (const auto& r : report.regimes) all_better = all_better && r.test_metrics["psnr"].get<double>() >= noisy_psnr + 1.0;
  const double prob_ssim = report.regime(kProbabilityInformed).test_metrics["ssim"].get<double>();
  const double err_ssim = report.regime(kRmseOptimized).test_metrics["ssim"].get<double>();
  report.verdicts = {{"every_regime_beats_noisy_psnr_by_1db", all_better},
                     {"probability_informed_ssim_at_least_rmse_optimized", prob_ssim >= err_ssim}};
  if (cfg.noise_sd == 0.1)
    report.verdicts.emplace_back("noisy_psnr_near_20db", std::abs(noisy_psnr - 20.0) <= 0.5);
  bool finite = true;
  for (const auto& r : report.regimes)
    finite = finite && std::isfinite(r.cdf_distance) && std::isfinite(r.test_metrics["psnr"].get<double>());
  report.invariants = {{"histories_consistent", histories_ok}, {"metrics_finite", finite}};

  if (!out_dir.empty()) {
    persist_report(report, out_dir);
    target.save_csv(detail::join_path(out_dir, "cdf_target.csv"));
    save_pgm(clean, detail::join_path(out_dir, "clean.pgm"));
    save_pgm(noisy, detail::join_path(out_dir, "noisy.pgm"));
    for (const auto& [name, img] : outputs.denoised) {
      save_pgm(img, detail::join_path(out_dir, "denoised_" + name + ".pgm"));
      ecdf_build(std::span<const double>(img.pixels())).save_csv(detail::join_path(out_dir, "cdf_predicted_" + name + ".csv"));
    }
  }
  if (images) *images = std::move(outputs);
  return report;
}

}  // namespace cdfmatch

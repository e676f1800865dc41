#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cdfmatch/rng.hpp"
#include "cdfmatch/types.hpp"

namespace cdfmatch {

/// Grayscale image with row-major pixels in [0, 1].
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(std::size_t width, std::size_t height, double fill = 0.0);
  /// Pixels are clamped into [0, 1].
  GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }

  double at(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }
  /// Stores a clamped value.
  void set(std::size_t row, std::size_t col, double value);

  const std::vector<double>& pixels() const { return pixels_; }

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> pixels_;
};

/// Reads P2 (ASCII) or P5 (binary, 8 or 16 bit) PGM. Throws std::runtime_error.
GrayImage load_pgm(const std::string& path);
/// Writes binary P5 with the given maxval (255 or up to 65535).
void save_pgm(const GrayImage& image, const std::string& path, int maxval = 255);

/// pixel + N(0, sd^2), clamped.
GrayImage add_gaussian_noise(const GrayImage& image, double sd, RngStream rng);

struct PixelIndex {
  std::size_t row = 0;
  std::size_t col = 0;
};

struct PatchSet {
  Matrix features;
  std::vector<PixelIndex> centers;
};

/// Flattened patch_size x patch_size neighborhoods around every stride-th
/// pixel, mirrored at the borders (edge pixel repeated: -1 -> 0, -2 -> 1).
PatchSet extract_patches(const GrayImage& image, std::size_t patch_size, std::size_t stride = 1);

/// Same features for an explicit list of centers.
Matrix extract_patches_at(const GrayImage& image, std::size_t patch_size,
                          const std::vector<PixelIndex>& centers);

/// Built-in test picture: smooth gradient, checkerboard quadrant and disks.
GrayImage synthetic_test_image(std::size_t width = 128, std::size_t height = 128);

}  // namespace cdfmatch

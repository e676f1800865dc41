#include "cdfmatch/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

namespace cdfmatch {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), pixels_(width * height, clamp01(fill)) {}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != width * height) throw std::invalid_argument("pixel count does not match image size");
  for (auto& p : pixels_) {
    if (std::isnan(p)) throw std::invalid_argument("pixel value is NaN");
    p = clamp01(p);
  }
}

void GrayImage::set(std::size_t row, std::size_t col, double value) {
  pixels_[row * width_ + col] = clamp01(value);
}

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::string data) : data_(std::move(data)) {}

  std::string magic() {
    if (data_.size() < 2) throw std::runtime_error("PGM: file too short");
    pos_ = 2;
    return data_.substr(0, 2);
  }

  // Header integer, skipping whitespace and comments.
  long header_int() {
    skip_space();
    if (pos_ >= data_.size() || !std::isdigit(static_cast<unsigned char>(data_[pos_])))
      throw std::runtime_error("PGM: malformed header");
    long value = 0;
    while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
      value = value * 10 + (data_[pos_] - '0');
      if (value > 1'000'000'000L) throw std::runtime_error("PGM: header value too large");
      ++pos_;
    }
    return value;
  }

  void single_whitespace() {
    if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_])))
      throw std::runtime_error("PGM: missing separator before raster");
    ++pos_;
  }

  unsigned next_binary(bool wide) {
    const std::size_t need = wide ? 2 : 1;
    if (pos_ + need > data_.size()) throw std::runtime_error("PGM: truncated raster");
    unsigned v = static_cast<unsigned char>(data_[pos_]);
    if (wide) v = (v << 8) | static_cast<unsigned char>(data_[pos_ + 1]);
    pos_ += need;
    return v;
  }

  unsigned next_ascii() {
    skip_space();
    if (pos_ >= data_.size()) throw std::runtime_error("PGM: truncated raster");
    return static_cast<unsigned>(header_int());
  }

 private:
  void skip_space() {
    while (pos_ < data_.size()) {
      const char c = data_[pos_];
      if (c == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string data_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage load_pgm(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  PgmReader reader(std::string(std::istreambuf_iterator<char>(is), {}));
  const std::string magic = reader.magic();
  if (magic != "P2" && magic != "P5") throw std::runtime_error("PGM: bad magic '" + magic + "'");
  const long width = reader.header_int();
  const long height = reader.header_int();
  const long maxval = reader.header_int();
  if (width <= 0 || height <= 0) throw std::runtime_error("PGM: non-positive dimensions");
  if (maxval <= 0 || maxval > 65535) throw std::runtime_error("PGM: maxval outside 1..65535");

  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<double> pixels(count);
  const double scale = static_cast<double>(maxval);
  if (magic == "P5") {
    reader.single_whitespace();
    const bool wide = maxval > 255;
    for (auto& p : pixels) p = reader.next_binary(wide) / scale;
  } else {
    for (auto& p : pixels) {
      const unsigned v = reader.next_ascii();
      if (v > static_cast<unsigned>(maxval)) throw std::runtime_error("PGM: sample exceeds maxval");
      p = v / scale;
    }
  }
  return GrayImage(static_cast<std::size_t>(width), static_cast<std::size_t>(height), std::move(pixels));
}

void save_pgm(const GrayImage& image, const std::string& path, int maxval) {
  if (maxval <= 0 || maxval > 65535) throw std::invalid_argument("PGM maxval must be in 1..65535");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << "P5\n" << image.width() << ' ' << image.height() << '\n' << maxval << '\n';
  const bool wide = maxval > 255;
  for (double p : image.pixels()) {
    const auto v = static_cast<unsigned>(std::lround(p * maxval));
    if (wide) os.put(static_cast<char>((v >> 8) & 0xFF));
    os.put(static_cast<char>(v & 0xFF));
  }
  if (!os) throw std::runtime_error("failed writing " + path);
}

GrayImage add_gaussian_noise(const GrayImage& image, double sd, RngStream rng) {
  if (!(sd >= 0.0)) throw std::invalid_argument("noise sd must be non-negative");
  if (sd == 0.0) return image;
  RandomEngine eng(rng);
  std::vector<double> out(image.pixels());
  for (auto& p : out) p += eng.normal(0.0, sd);
  return GrayImage(image.width(), image.height(), std::move(out));
}

namespace {

// Half-sample symmetric mirror: -1 -> 0, -2 -> 1, n -> n - 1.
std::size_t mirror(long i, std::size_t n) {
  const long len = static_cast<long>(n);
  const long period = 2 * len;
  long m = i % period;
  if (m < 0) m += period;
  return static_cast<std::size_t>(m < len ? m : period - 1 - m);
}

void check_patch(const GrayImage& image, std::size_t patch_size) {
  if (patch_size < 3 || patch_size % 2 == 0) throw std::invalid_argument("patch size must be odd and at least 3");
  if (image.width() < patch_size || image.height() < patch_size)
    throw std::invalid_argument("image is too small for the patch size");
}

void fill_patch(const GrayImage& image, std::size_t patch_size, PixelIndex center, double* out) {
  const long half = static_cast<long>(patch_size / 2);
  std::size_t k = 0;
  for (long dr = -half; dr <= half; ++dr) {
    const std::size_t r = mirror(static_cast<long>(center.row) + dr, image.height());
    for (long dc = -half; dc <= half; ++dc) {
      const std::size_t c = mirror(static_cast<long>(center.col) + dc, image.width());
      out[k++] = image.at(r, c);
    }
  }
}

}  // namespace

Matrix extract_patches_at(const GrayImage& image, std::size_t patch_size,
                          const std::vector<PixelIndex>& centers) {
  check_patch(image, patch_size);
  Matrix features(static_cast<Eigen::Index>(centers.size()), static_cast<Eigen::Index>(patch_size * patch_size));
  for (std::size_t i = 0; i < centers.size(); ++i) {
    if (centers[i].row >= image.height() || centers[i].col >= image.width())
      throw std::out_of_range("patch center outside the image");
    fill_patch(image, patch_size, centers[i], features.row(static_cast<Eigen::Index>(i)).data());
  }
  return features;
}

PatchSet extract_patches(const GrayImage& image, std::size_t patch_size, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("stride must be positive");
  check_patch(image, patch_size);
  PatchSet set;
  for (std::size_t r = 0; r < image.height(); r += stride)
    for (std::size_t c = 0; c < image.width(); c += stride) set.centers.push_back({r, c});
  set.features = extract_patches_at(image, patch_size, set.centers);
  return set;
}

GrayImage synthetic_test_image(std::size_t width, std::size_t height) {
  GrayImage img(width, height);
  const double w = static_cast<double>(width);
  const double h = static_cast<double>(height);
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      const double x = (static_cast<double>(c) + 0.5) / w;
      const double y = (static_cast<double>(r) + 0.5) / h;
      double v = 0.25 + 0.5 * x;  // horizontal ramp
      if (x < 0.5 && y < 0.5) {
        const bool odd = (static_cast<int>(x * 8.0) + static_cast<int>(y * 8.0)) % 2 == 1;
        v = odd ? 0.85 : 0.15;
      }
      const double d1 = std::hypot(x - 0.72, y - 0.30);
      if (d1 < 0.16) v = 0.92;
      const double d2 = std::hypot(x - 0.30, y - 0.74);
      if (d2 < 0.14) v = 0.08;
      if (y > 0.62 && y < 0.68 && x > 0.5) v = 0.5 + 0.4 * std::sin(12.0 * x);  // textured band
      img.set(r, c, v);
    }
  }
  return img;
}

}  // namespace cdfmatch

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cdfmatch/dataset.hpp"
#include "cdfmatch/image.hpp"
#include "cdfmatch/rng.hpp"

using namespace cdfmatch;
namespace fs = std::filesystem;

namespace {

const std::string kIonosphere = std::string(CDFMATCH_SOURCE_DIR) + "/data/ionosphere.data";

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "cdfmatch_data_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string ionosphere_row(int features, char label) {
  std::ostringstream os;
  for (int i = 0; i < features; ++i) os << (i % 3 == 0 ? "1" : "0.25") << ',';
  os << label;
  return os.str();
}

}  // namespace

TEST_CASE("canonical ionosphere file") {
  const LabeledDataset d = load_ionosphere(kIonosphere);
  CHECK(d.rows() == 351);
  CHECK(d.cols() == 34);
  CHECK(d.labels.sum() == 225.0);
  CHECK(d.feature_names.size() == 34);
}

TEST_CASE("ionosphere parsing rules") {
  std::istringstream good(ionosphere_row(34, 'g') + "\n" + ionosphere_row(34, 'b') + "\n");
  const LabeledDataset d = parse_ionosphere(good);
  CHECK(d.rows() == 2);
  CHECK(d.labels[0] == 1.0);
  CHECK(d.labels[1] == 0.0);

  std::istringstream short_row(ionosphere_row(34, 'g') + "\n" + ionosphere_row(33, 'g') + "\n");
  CHECK_THROWS_WITH(parse_ionosphere(short_row), doctest::Contains("line 2"));

  std::istringstream bad_label(ionosphere_row(34, 'x') + "\n");
  CHECK_THROWS_WITH(parse_ionosphere(bad_label), doctest::Contains("line 1"));

  std::string row = ionosphere_row(34, 'g');
  row.replace(0, 1, "abc");
  std::istringstream bad_number(row + "\n");
  CHECK_THROWS_WITH(parse_ionosphere(bad_number), doctest::Contains("line 1"));

  CHECK_THROWS(load_ionosphere("/nonexistent/ionosphere.data"));
}

TEST_CASE("split sizes, determinism and stratification") {
  const LabeledDataset d = load_ionosphere(kIonosphere);
  const SplitIndices s = split_indices(d.labels, {0.2, true, 3});
  CHECK(s.train.size() == 70);
  CHECK(s.test.size() == 281);
  const SplitIndices again = split_indices(d.labels, {0.2, true, 3});
  CHECK(again.train == s.train);
  CHECK(again.test == s.test);
  CHECK(split_indices(d.labels, {0.2, true, 4}).train != s.train);

  // Partition of all rows.
  std::vector<int> seen(351, 0);
  for (auto i : s.train) ++seen[i];
  for (auto i : s.test) ++seen[i];
  for (int v : seen) CHECK(v == 1);

  Vector labels(100);
  for (Eigen::Index i = 0; i < 100; ++i) labels[i] = i < 40 ? 1.0 : 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SplitIndices h = split_indices(labels, {0.5, true, seed});
    CHECK(h.train.size() == 50);
    std::size_t pos = 0;
    for (auto i : h.train) pos += labels[static_cast<Eigen::Index>(i)] == 1.0;
    CHECK(pos >= 19);
    CHECK(pos <= 21);
  }

  const auto [train, test] = split(d, {0.5, false, 1});
  CHECK(train.rows() + test.rows() == 351);
  CHECK(train.rows() == 176);  // round(175.5) away from zero
  CHECK_THROWS(split_indices(d.labels, {1.0, true, 1}));
  CHECK_THROWS(split_indices(d.labels, {0.0, true, 1}));
}

TEST_CASE("PGM reading normalizes by maxval") {
  const fs::path p = scratch("tiny.pgm");
  {
    std::ofstream os(p, std::ios::binary);
    os << "P5\n# comment\n2 2\n255\n";
    const unsigned char px[4] = {0, 255, 128, 64};
    os.write(reinterpret_cast<const char*>(px), 4);
  }
  const GrayImage img = load_pgm(p.string());
  CHECK(img.width() == 2);
  CHECK(img.height() == 2);
  CHECK(img.at(0, 0) == 0.0);
  CHECK(img.at(0, 1) == 1.0);
  CHECK(img.at(1, 0) == doctest::Approx(0.50196).epsilon(1e-5));
  CHECK(img.at(1, 1) == doctest::Approx(0.25098).epsilon(1e-5));

  const fs::path ascii = scratch("tiny_ascii.pgm");
  {
    std::ofstream os(ascii);
    os << "P2\n2 2\n1000\n0 1000\n500 250\n";
  }
  const GrayImage a = load_pgm(ascii.string());
  CHECK(a.at(1, 0) == 0.5);
  CHECK(a.at(1, 1) == 0.25);
}

TEST_CASE("PGM round trip and error paths") {
  const GrayImage img = synthetic_test_image(37, 29);
  const fs::path p = scratch("roundtrip.pgm");
  save_pgm(img, p.string());
  const GrayImage back = load_pgm(p.string());
  REQUIRE(back.width() == 37);
  REQUIRE(back.height() == 29);
  double worst = 0.0;
  for (std::size_t i = 0; i < img.size(); ++i) worst = std::max(worst, std::abs(img.pixels()[i] - back.pixels()[i]));
  CHECK(worst <= 1.0 / 510.0 + 1e-15);

  const fs::path deep = scratch("deep.pgm");
  save_pgm(img, deep.string(), 65535);
  const GrayImage back16 = load_pgm(deep.string());
  for (std::size_t i = 0; i < img.size(); ++i) REQUIRE(std::abs(img.pixels()[i] - back16.pixels()[i]) <= 1.0 / 131070.0 + 1e-15);

  const fs::path truncated = scratch("truncated.pgm");
  {
    std::ofstream os(truncated, std::ios::binary);
    os << "P5\n4 4\n255\n";
    os.write("abcdef", 6);
  }
  CHECK_THROWS_WITH(load_pgm(truncated.string()), doctest::Contains("truncated"));

  const fs::path magic = scratch("magic.pgm");
  {
    std::ofstream os(magic);
    os << "P6\n1 1\n255\n";
  }
  CHECK_THROWS(load_pgm(magic.string()));
  CHECK_THROWS(load_pgm(scratch("missing.pgm").string()));
}

TEST_CASE("gaussian noise") {
  const GrayImage gray(256, 256, 0.5);
  CHECK(add_gaussian_noise(gray, 0.0, {1, 1}).pixels() == gray.pixels());

  const GrayImage noisy = add_gaussian_noise(gray, 0.1, {1, 1});
  double mean = 0.0;
  for (double p : noisy.pixels()) {
    REQUIRE(p >= 0.0);
    REQUIRE(p <= 1.0);
    mean += p - 0.5;
  }
  mean /= static_cast<double>(noisy.size());
  double var = 0.0;
  for (double p : noisy.pixels()) var += (p - 0.5 - mean) * (p - 0.5 - mean);
  const double sd = std::sqrt(var / static_cast<double>(noisy.size() - 1));
  CHECK(sd >= 0.095);
  CHECK(sd <= 0.105);

  const GrayImage bright(64, 64, 0.97);
  for (double p : add_gaussian_noise(bright, 0.1, {2, 2}).pixels()) REQUIRE(p <= 1.0);
  CHECK_THROWS(add_gaussian_noise(gray, -0.1, {1, 1}));
}

TEST_CASE("patch extraction") {
  const GrayImage five(5, 5, 0.3);
  const PatchSet s = extract_patches(five, 3, 1);
  CHECK(s.features.rows() == 25);
  CHECK(s.features.cols() == 9);
  for (Eigen::Index r = 1; r < 25; ++r) CHECK(s.features.row(r) == s.features.row(0));
  CHECK(extract_patches(five, 3, 2).features.rows() == 9);

  // 3x3 ramp: value = (3 * row + col) / 10.
  GrayImage ramp(3, 3);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) ramp.set(r, c, static_cast<double>(3 * r + c) / 10.0);
  const Matrix corner = extract_patches_at(ramp, 3, {{0, 0}});
  // Mirror across the edge: row -1 reads row 0, column -1 reads column 0.
  const double expected[9] = {0.0, 0.0, 0.1, 0.0, 0.0, 0.1, 0.3, 0.3, 0.4};
  for (int k = 0; k < 9; ++k) CHECK(corner(0, k) == doctest::Approx(expected[k]));
  const Matrix far = extract_patches_at(ramp, 3, {{2, 2}});
  const double expected_far[9] = {0.4, 0.5, 0.5, 0.7, 0.8, 0.8, 0.7, 0.8, 0.8};
  for (int k = 0; k < 9; ++k) CHECK(far(0, k) == doctest::Approx(expected_far[k]));

  CHECK_THROWS(extract_patches(five, 4, 1));
  CHECK_THROWS(extract_patches(five, 3, 0));
  CHECK_THROWS(extract_patches(five, 7, 1));
  CHECK_THROWS(extract_patches_at(five, 3, {{5, 0}}));
}

TEST_CASE("synthetic image is deterministic and uses the range") {
  const GrayImage a = synthetic_test_image(128, 128);
  CHECK(a.pixels() == synthetic_test_image(128, 128).pixels());
  const auto [lo, hi] = std::minmax_element(a.pixels().begin(), a.pixels().end());
  CHECK(*lo <= 0.1);
  CHECK(*hi >= 0.9);
}

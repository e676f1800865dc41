#include "cdfmatch/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cdfmatch {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw std::runtime_error("ionosphere line " + std::to_string(line) + ": " + what);
}

}  // namespace

LabeledDataset parse_ionosphere(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::vector<double> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != kIonosphereFeatures + 1)
      fail(line_no, "expected " + std::to_string(kIonosphereFeatures) + " features and a label, got " +
                        std::to_string(fields.size()) + " fields");
    std::vector<double> row(kIonosphereFeatures);
    for (int c = 0; c < kIonosphereFeatures; ++c) {
      const std::string& f = fields[static_cast<std::size_t>(c)];
      try {
        std::size_t used = 0;
        row[static_cast<std::size_t>(c)] = std::stod(f, &used);
        if (used != f.size()) throw std::invalid_argument(f);
      } catch (const std::exception&) {
        fail(line_no, "column " + std::to_string(c + 1) + " is not a number");
      }
      if (!std::isfinite(row[static_cast<std::size_t>(c)]))
        fail(line_no, "column " + std::to_string(c + 1) + " is not finite");
    }
    const std::string& label = fields.back();
    if (label == "g") labels.push_back(1.0);
    else if (label == "b") labels.push_back(0.0);
    else fail(line_no, "label must be 'g' or 'b', got '" + label + "'");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("ionosphere file has no rows");

  LabeledDataset data;
  data.features.resize(static_cast<Eigen::Index>(rows.size()), kIonosphereFeatures);
  data.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < kIonosphereFeatures; ++c)
      data.features(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<std::size_t>(c)];
    data.labels[static_cast<Eigen::Index>(r)] = labels[r];
  }
  for (int c = 0; c < kIonosphereFeatures; ++c) data.feature_names.push_back("a" + std::to_string(c + 1));
  return data;
}

LabeledDataset load_ionosphere(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return parse_ionosphere(is);
}

SplitIndices split_indices(const Vector& labels, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw std::invalid_argument("train fraction must lie in (0, 1)");
  const auto n = static_cast<std::size_t>(labels.size());
  const auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.train_fraction));
  if (n_train == 0 || n_train >= n) throw std::invalid_argument("split leaves an empty side");

  RandomEngine eng(RngStream{spec.seed, 0x5EB17ULL});
  auto shuffle = [&](std::vector<std::size_t>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[eng.below(i)]);
  };

  std::vector<std::size_t> train;
  if (!spec.stratified) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    shuffle(all);
    train.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
  } else {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < n; ++i) (labels[static_cast<Eigen::Index>(i)] == 1.0 ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty()) throw std::invalid_argument("stratified split needs both classes");
    // Largest-remainder allocation of n_train across the two classes.
    const double exact_pos = static_cast<double>(pos.size()) * spec.train_fraction;
    const double exact_neg = static_cast<double>(neg.size()) * spec.train_fraction;
    std::size_t take_pos = static_cast<std::size_t>(std::floor(exact_pos));
    std::size_t take_neg = static_cast<std::size_t>(std::floor(exact_neg));
    while (take_pos + take_neg < n_train) {
      const double rp = take_pos < pos.size() ? exact_pos - static_cast<double>(take_pos) : -1.0;
      const double rn = take_neg < neg.size() ? exact_neg - static_cast<double>(take_neg) : -1.0;
      if (rp >= rn) ++take_pos; else ++take_neg;
    }
    while (take_pos + take_neg > n_train) {
      if (take_pos >= take_neg && take_pos > 0) --take_pos; else --take_neg;
    }
    shuffle(pos);
    shuffle(neg);
    train.assign(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(take_pos));
    train.insert(train.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(take_neg));
  }
  std::sort(train.begin(), train.end());
  SplitIndices out;
  out.train = train;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (k < train.size() && train[k] == i) ++k;
    else out.test.push_back(i);
  }
  return out;
}

LabeledDataset take_rows(const LabeledDataset& data, const std::vector<std::size_t>& rows) {
  LabeledDataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), data.cols());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto r = static_cast<Eigen::Index>(rows[k]);
    if (r >= data.rows()) throw std::out_of_range("row index outside the dataset");
    out.features.row(static_cast<Eigen::Index>(k)) = data.features.row(r);
    out.labels[static_cast<Eigen::Index>(k)] = data.labels[r];
  }
  out.feature_names = data.feature_names;
  return out;
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& data, const SplitSpec& spec) {
  const SplitIndices idx = split_indices(data.labels, spec);
  return {take_rows(data, idx.train), take_rows(data, idx.test)};
}

}  // namespace cdfmatch

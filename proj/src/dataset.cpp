#include "flowids/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "flowids/rng.hpp"

namespace flowids {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

bool iequals(const std::string& a, const char* b) {
  std::size_t i = 0;
  for (; i < a.size() && b[i] != '\0'; ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  }
  return i == a.size() && b[i] == '\0';
}

// Parses a finite double; the whole cell must be consumed.
bool parse_finite(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end != begin + cell.size()) return false;
  if (!std::isfinite(v)) return false;
  out = v;
  return true;
}

}  // namespace

RawTable load_csv(const std::string& path, const std::string& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  // Tolerate a UTF-8 byte-order mark on the first line.
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
      static_cast<unsigned char>(line[1]) == 0xBB &&
      static_cast<unsigned char>(line[2]) == 0xBF) {
    line.erase(0, 3);
  }

  RawTable table;
  table.column_names = split_line(line);

  const auto it = std::find(table.column_names.begin(), table.column_names.end(),
                            label_column);
  if (it == table.column_names.end()) {
    throw std::runtime_error("label column \"" + label_column +
                             "\" not found in header of " + path);
  }
  table.label_column = static_cast<std::size_t>(it - table.column_names.begin());

  std::size_t row_index = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row_index;
    auto cells = split_line(line);
    if (cells.size() != table.column_names.size()) {
      throw std::runtime_error("row " + std::to_string(row_index) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(table.column_names.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

CleanResult clean(const RawTable& table) {
  if (table.label_column >= table.n_columns())
    throw std::invalid_argument("label column index out of range");

  const std::size_t n_features = table.n_columns() - 1;
  CleanResult result;
  result.features.n_features = n_features;

  std::vector<double> row_values(n_features);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& cells = table.rows[r];
    bool ok = true;
    std::size_t f = 0;
    for (std::size_t c = 0; c < cells.size() && ok; ++c) {
      if (c == table.label_column) continue;
      if (!parse_finite(cells[c], row_values[f])) ok = false;
      ++f;
    }
    if (!ok || cells[table.label_column].empty()) {
      ++result.dropped_count;
      continue;
    }
    result.features.values.insert(result.features.values.end(), row_values.begin(),
                                  row_values.end());
    result.labels.values.push_back(iequals(cells[table.label_column], "BENIGN") ? 0 : 1);
    result.kept_rows.push_back(r);
  }
  result.features.n_patterns = result.labels.size();
  if (result.features.n_patterns == 0)
    throw std::runtime_error("no rows survived cleaning");
  return result;
}

Normalizer fit_normalizer(const FeatureMatrix& features) {
  if (features.n_patterns == 0) throw std::invalid_argument("empty feature matrix");
  Normalizer norm;
  norm.col_min.assign(features.n_features, 0.0);
  norm.col_max.assign(features.n_features, 0.0);
  for (std::size_t j = 0; j < features.n_features; ++j) {
    double lo = features.at(0, j);
    double hi = lo;
    for (std::size_t i = 1; i < features.n_patterns; ++i) {
      const double v = features.at(i, j);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    norm.col_min[j] = lo;
    norm.col_max[j] = hi;
  }
  return norm;
}

FeatureMatrix apply_normalizer(const Normalizer& norm, const FeatureMatrix& features) {
  if (norm.n_features() != features.n_features)
    throw std::invalid_argument("normalizer fitted for " +
                                std::to_string(norm.n_features()) +
                                " features, matrix has " +
                                std::to_string(features.n_features));
  FeatureMatrix out(features.n_patterns, features.n_features);
  for (std::size_t j = 0; j < features.n_features; ++j) {
    const double lo = norm.col_min[j];
    const double range = norm.col_max[j] - lo;
    for (std::size_t i = 0; i < features.n_patterns; ++i) {
      double v = range > 0.0 ? (features.at(i, j) - lo) / range : 0.0;
      out.at(i, j) = std::clamp(v, 0.0, 1.0);
    }
  }
  return out;
}

namespace {

DataSplit gather(const FeatureMatrix& features, const LabelVector& labels,
                 std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  DataSplit part;
  part.features = FeatureMatrix(indices.size(), features.n_features);
  part.labels.values.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const auto src = features.row(indices[k]);
    std::copy(src.begin(), src.end(), part.features.row(k).begin());
    part.labels.values.push_back(labels[indices[k]]);
  }
  part.indices = std::move(indices);
  return part;
}

}  // namespace

SplitResult split(const FeatureMatrix& features, const LabelVector& labels,
                  const SplitSpec& spec) {
  if (labels.size() != features.n_patterns)
    throw std::invalid_argument("features and labels are not aligned");
  if (features.n_patterns < 10)
    throw std::invalid_argument("need at least 10 patterns to split");
  const double sum =
      spec.train_fraction + spec.validation_fraction + spec.test_fraction;
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("split fractions must sum to 1");
  if (spec.train_fraction <= 0.0 || spec.validation_fraction < 0.0 ||
      spec.test_fraction < 0.0)
    throw std::invalid_argument("split fractions must be nonnegative");

  Rng rng(spec.seed);

  // Groups of indices to partition: one per class when stratified,
  // otherwise everything together.
  std::vector<std::vector<std::size_t>> groups;
  if (spec.stratified) {
    groups.resize(2);
    for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
    if (groups[0].empty() || groups[1].empty()) {
      groups = {std::vector<std::size_t>(labels.size())};
      std::iota(groups[0].begin(), groups[0].end(), std::size_t{0});
    }
  } else {
    groups.resize(1);
    groups[0].resize(labels.size());
    std::iota(groups[0].begin(), groups[0].end(), std::size_t{0});
  }

  std::vector<std::size_t> train_idx, val_idx, test_idx;
  SplitResult result;
  for (auto& group : groups) {
    rng.shuffle(group);
    const std::size_t n = group.size();
    const std::size_t n_train = static_cast<std::size_t>(spec.train_fraction * n);
    const std::size_t n_val = static_cast<std::size_t>(spec.validation_fraction * n);
    train_idx.insert(train_idx.end(), group.begin(), group.begin() + n_train);
    val_idx.insert(val_idx.end(), group.begin() + n_train,
                   group.begin() + n_train + n_val);
    test_idx.insert(test_idx.end(), group.begin() + n_train + n_val, group.end());
  }

  result.train = gather(features, labels, std::move(train_idx));
  result.validation = gather(features, labels, std::move(val_idx));
  result.test = gather(features, labels, std::move(test_idx));

  const char* part_names[] = {"train", "validation", "test"};
  const DataSplit* parts[] = {&result.train, &result.validation, &result.test};
  for (int p = 0; p < 3; ++p) {
    bool has[2] = {false, false};
    for (const auto v : parts[p]->labels.values) has[v] = true;
    if (parts[p]->labels.size() > 0 && (!has[0] || !has[1])) {
      result.warnings.push_back(std::string("class ") + (has[0] ? "1" : "0") +
                                " is absent from the " + part_names[p] + " split");
    }
  }
  return result;
}

}  // namespace flowids

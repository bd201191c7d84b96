#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace flowids {

// Raw CSV contents: header names plus untyped text cells. Every row has
// exactly one cell per column; one column is designated as the label.
struct RawTable {
  std::vector<std::string> column_names;
  std::vector<std::vector<std::string>> rows;
  std::size_t label_column = 0;

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_columns() const { return column_names.size(); }
};

// Dense row-major matrix of finite feature values.
struct FeatureMatrix {
  std::size_t n_patterns = 0;
  std::size_t n_features = 0;
  std::vector<double> values;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols)
      : n_patterns(rows), n_features(cols), values(rows * cols, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return values[i * n_features + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * n_features + j]; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * n_features, n_features};
  }
  std::span<double> row(std::size_t i) {
    return {values.data() + i * n_features, n_features};
  }
};

// Binary targets aligned with a FeatureMatrix: 1 = attack, 0 = benign.
struct LabelVector {
  std::vector<std::uint8_t> values;

  std::size_t size() const { return values.size(); }
  std::uint8_t operator[](std::size_t i) const { return values[i]; }
};

// Per-column min/max statistics. Fit on training data, applied everywhere.
struct Normalizer {
  std::vector<double> col_min;
  std::vector<double> col_max;

  std::size_t n_features() const { return col_min.size(); }
};

struct SplitSpec {
  double train_fraction = 0.8;
  double validation_fraction = 0.1;
  double test_fraction = 0.1;
  std::uint64_t seed = 1;
  bool stratified = true;
};

struct CleanResult {
  FeatureMatrix features;
  LabelVector labels;
  std::size_t dropped_count = 0;
  // Indices into the source RawTable of the rows that survived, in order.
  std::vector<std::size_t> kept_rows;
};

struct DataSplit {
  FeatureMatrix features;
  LabelVector labels;
  // Indices into the cleaned matrix this part was drawn from, ascending.
  std::vector<std::size_t> indices;
};

struct SplitResult {
  DataSplit train;
  DataSplit validation;
  DataSplit test;
  std::vector<std::string> warnings;
};

// Reads a comma-delimited file with a header row. Cells are trimmed, an
// optional UTF-8 BOM is tolerated, and no type coercion happens yet.
// Throws if the file is missing, the label column is not in the header, or
// any row's cell count differs from the header's.
RawTable load_csv(const std::string& path, const std::string& label_column);

// Drops every row with an empty cell, a non-numeric feature cell, or a
// NaN/infinite value, then encodes labels: "BENIGN" (case-insensitive,
// trimmed) -> 0, anything else -> 1. Surviving values are copied unchanged.
// Throws if no rows survive.
CleanResult clean(const RawTable& table);

// Column-wise min/max over the given matrix. Throws on an empty matrix.
Normalizer fit_normalizer(const FeatureMatrix& features);

// Maps each cell to (x - min) / (max - min), clamped to [0, 1] so unseen
// out-of-range data stays inside the sigmoid's input domain. A constant
// column (max == min) maps to all zeros.
FeatureMatrix apply_normalizer(const Normalizer& norm, const FeatureMatrix& features);

// Seeded, optionally class-stratified, three-way partition. Parts are
// disjoint and exhaustive; the same seed reproduces the same index lists.
// Stratification failures (a class too small to appear everywhere) are
// reported as warnings, not errors.
SplitResult split(const FeatureMatrix& features, const LabelVector& labels,
                  const SplitSpec& spec);

}  // namespace flowids

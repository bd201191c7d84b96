#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "flowids/dataset.hpp"

namespace flowids {

struct DeepModel;

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
};

struct Metrics {
  double sensitivity = 0.0;  // TP / (TP + FN)
  double specificity = 0.0;  // TN / (TN + FP)
  double accuracy = 0.0;     // (TP + TN) / total
  // Set when the corresponding denominator was zero and the value was
  // reported as 1 (nothing to miss / nothing to pass).
  bool sensitivity_degenerate = false;
  bool specificity_degenerate = false;
  ConfusionMatrix matrix;
};

// Counts tp (pred 1, target 1), tn (0,0), fp (1,0), fn (0,1).
ConfusionMatrix confusion(std::span<const std::uint8_t> predictions,
                          std::span<const std::uint8_t> targets);
ConfusionMatrix confusion(const std::vector<int>& predictions,
                          const LabelVector& targets);

Metrics compute_metrics(const ConfusionMatrix& matrix);

// Scores every raw pattern through the full model and aggregates the counts.
Metrics evaluate(const DeepModel& model, const FeatureMatrix& raw_features,
                 const LabelVector& labels);

// CSV row: total,tp,tn,fp,fn,sensitivity,specificity,accuracy
// (metrics rendered at 4 decimal places).
std::string metrics_csv_header();
std::string metrics_csv_row(const Metrics& metrics);

// Human-readable block for terminal output.
std::string metrics_report_text(const Metrics& metrics);

}  // namespace flowids

#include "flowids/evaluation.hpp"

#include <cstdio>
#include <stdexcept>

#include "flowids/pipeline.hpp"

namespace flowids {

ConfusionMatrix confusion(std::span<const std::uint8_t> predictions,
                          std::span<const std::uint8_t> targets) {
  if (predictions.size() != targets.size())
    throw std::invalid_argument("predictions and targets differ in length");
  if (predictions.empty()) throw std::invalid_argument("nothing to evaluate");
  ConfusionMatrix m;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool pred = predictions[i] != 0;
    const bool truth = targets[i] != 0;
    if (pred && truth)
      ++m.tp;
    else if (!pred && !truth)
      ++m.tn;
    else if (pred && !truth)
      ++m.fp;
    else
      ++m.fn;
  }
  return m;
}

ConfusionMatrix confusion(const std::vector<int>& predictions,
                          const LabelVector& targets) {
  std::vector<std::uint8_t> preds(predictions.size());
  for (std::size_t i = 0; i < predictions.size(); ++i)
    preds[i] = predictions[i] != 0 ? 1 : 0;
  return confusion(preds, std::span<const std::uint8_t>(targets.values));
}

Metrics compute_metrics(const ConfusionMatrix& matrix) {
  if (matrix.total() == 0) throw std::invalid_argument("empty confusion matrix");
  Metrics m;
  m.matrix = matrix;
  if (matrix.tp + matrix.fn > 0) {
    m.sensitivity = static_cast<double>(matrix.tp) /
                    static_cast<double>(matrix.tp + matrix.fn);
  } else {
    m.sensitivity = 1.0;
    m.sensitivity_degenerate = true;
  }
  if (matrix.tn + matrix.fp > 0) {
    m.specificity = static_cast<double>(matrix.tn) /
                    static_cast<double>(matrix.tn + matrix.fp);
  } else {
    m.specificity = 1.0;
    m.specificity_degenerate = true;
  }
  m.accuracy = static_cast<double>(matrix.tp + matrix.tn) /
               static_cast<double>(matrix.total());
  return m;
}

Metrics evaluate(const DeepModel& model, const FeatureMatrix& raw_features,
                 const LabelVector& labels) {
  if (labels.size() != raw_features.n_patterns)
    throw std::invalid_argument("features and labels are not aligned");
  std::vector<std::uint8_t> predictions(raw_features.n_patterns);
  for (std::size_t i = 0; i < raw_features.n_patterns; ++i)
    predictions[i] =
        static_cast<std::uint8_t>(score(model, raw_features.row(i)).label);
  return compute_metrics(
      confusion(predictions, std::span<const std::uint8_t>(labels.values)));
}

std::string metrics_csv_header() {
  return "total,tp,tn,fp,fn,sensitivity,specificity,accuracy";
}

std::string metrics_csv_row(const Metrics& m) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%llu,%llu,%llu,%llu,%llu,%.4f,%.4f,%.4f",
                static_cast<unsigned long long>(m.matrix.total()),
                static_cast<unsigned long long>(m.matrix.tp),
                static_cast<unsigned long long>(m.matrix.tn),
                static_cast<unsigned long long>(m.matrix.fp),
                static_cast<unsigned long long>(m.matrix.fn), m.sensitivity,
                m.specificity, m.accuracy);
  return buf;
}

std::string metrics_report_text(const Metrics& m) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "patterns     %llu\n"
                "true pos     %llu\n"
                "true neg     %llu\n"
                "false pos    %llu\n"
                "false neg    %llu\n"
                "sensitivity  %.4f%s\n"
                "specificity  %.4f%s\n"
                "accuracy     %.4f\n",
                static_cast<unsigned long long>(m.matrix.total()),
                static_cast<unsigned long long>(m.matrix.tp),
                static_cast<unsigned long long>(m.matrix.tn),
                static_cast<unsigned long long>(m.matrix.fp),
                static_cast<unsigned long long>(m.matrix.fn), m.sensitivity,
                m.sensitivity_degenerate ? " (no positives in set)" : "",
                m.specificity,
                m.specificity_degenerate ? " (no negatives in set)" : "",
                m.accuracy);
  return buf;
}

}  // namespace flowids

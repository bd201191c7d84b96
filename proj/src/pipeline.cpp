#include "flowids/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flowids/format.hpp"
#include "flowids/rng.hpp"

namespace flowids {

namespace {

Normalizer resolve_normalizer(const FeatureMatrix& train_features,
                              const std::optional<Normalizer>& provided) {
  if (provided) {
    if (provided->n_features() != train_features.n_features)
      throw std::invalid_argument("normalizer does not match the feature count");
    return *provided;
  }
  return fit_normalizer(train_features);
}

}  // namespace

ShallowTrainResult train_shallow(const FeatureMatrix& train_features,
                                 const LabelVector& train_labels,
                                 const FeatureMatrix& validation_features,
                                 const LabelVector& validation_labels,
                                 const ExperimentConfig& config,
                                 const std::optional<Normalizer>& normalizer) {
  if (config.use_autoencoder)
    throw std::invalid_argument("shallow training called with use_autoencoder set");

  ShallowTrainResult result;
  result.model.normalizer = resolve_normalizer(train_features, normalizer);
  const FeatureMatrix train_x =
      apply_normalizer(result.model.normalizer, train_features);

  result.model.classifier = init_model(
      {train_features.n_features, kHiddenUnits, 1}, derive_seed(config.seed, 0));
  TrainConfig tc;
  tc.learning_rate = config.learning_rate;
  tc.epochs = config.epochs;
  tc.seed = derive_seed(config.seed, 1);
  result.trace = train(result.model.classifier, train_x, train_labels, tc);
  result.validation = evaluate(result.model, validation_features, validation_labels);
  return result;
}

DeepTrainResult train_deep(const FeatureMatrix& train_features,
                           const LabelVector& train_labels,
                           const FeatureMatrix& validation_features,
                           const LabelVector& validation_labels,
                           const ExperimentConfig& config,
                           const std::optional<Normalizer>& normalizer) {
  if (!config.use_autoencoder)
    throw std::invalid_argument("deep training called without use_autoencoder");

  DeepTrainResult result;
  result.model.normalizer = resolve_normalizer(train_features, normalizer);
  const FeatureMatrix train_x =
      apply_normalizer(result.model.normalizer, train_features);

  // Pretraining sees features only; labels never reach the autoencoder.
  auto [ae, ae_trace] =
      train_autoencoder(train_x, config.encoder_dim, config.ae_epochs,
                        config.learning_rate, derive_seed(config.seed, 2));
  result.autoencoder_trace = std::move(ae_trace);
  result.model.encoder = std::move(ae);

  // Encoder frozen from here on: codes are computed once.
  const FeatureMatrix train_codes = encode_all(*result.model.encoder, train_x);

  result.model.classifier = init_model({config.encoder_dim, kHiddenUnits, 1},
                                       derive_seed(config.seed, 0));
  TrainConfig tc;
  tc.learning_rate = config.learning_rate;
  tc.epochs = config.epochs;
  tc.seed = derive_seed(config.seed, 1);
  result.classifier_trace =
      train(result.model.classifier, train_codes, train_labels, tc);
  result.validation = evaluate(result.model, validation_features, validation_labels);
  return result;
}

ScoreResult score(const DeepModel& model, std::span<const double> raw_pattern) {
  if (raw_pattern.size() != model.normalizer.n_features())
    throw std::invalid_argument("pattern has " + std::to_string(raw_pattern.size()) +
                                " values, model expects " +
                                std::to_string(model.normalizer.n_features()));
  std::vector<double> normalized(raw_pattern.size());
  for (std::size_t j = 0; j < raw_pattern.size(); ++j) {
    if (!std::isfinite(raw_pattern[j]))
      throw std::invalid_argument("pattern value " + std::to_string(j) +
                                  " is not finite");
    const double lo = model.normalizer.col_min[j];
    const double range = model.normalizer.col_max[j] - lo;
    const double v = range > 0.0 ? (raw_pattern[j] - lo) / range : 0.0;
    normalized[j] = std::clamp(v, 0.0, 1.0);
  }

  ScoreResult result;
  if (model.encoder) {
    const auto code = encode(*model.encoder, normalized);
    result.probability = predict_probability(model.classifier, code);
  } else {
    result.probability = predict_probability(model.classifier, normalized);
  }
  result.label = classify(result.probability, model.threshold);
  return result;
}

std::vector<ScoreResult> score_all(const DeepModel& model, const FeatureMatrix& raw) {
  std::vector<ScoreResult> results;
  results.reserve(raw.n_patterns);
  for (std::size_t i = 0; i < raw.n_patterns; ++i)
    results.push_back(score(model, raw.row(i)));
  return results;
}

bool is_stable(const TrainTrace& trace) {
  if (trace.epoch_mse.empty()) return false;
  const std::size_t n = trace.epoch_mse.size();
  const std::size_t start = (3 * n) / 4;
  double lo = trace.epoch_mse[start];
  double hi = lo;
  for (std::size_t i = start; i < n; ++i) {
    lo = std::min(lo, trace.epoch_mse[i]);
    hi = std::max(hi, trace.epoch_mse[i]);
  }
  return (hi - lo) < kStableSpreadLimit;
}

std::vector<ExperimentConfig> table1_grid(std::uint64_t base_seed) {
  std::vector<ExperimentConfig> grid;
  const auto add = [&](std::size_t n_inputs, std::size_t epochs, double lr,
                       bool use_ae) {
    ExperimentConfig c;
    c.n_inputs = n_inputs;
    c.epochs = epochs;
    c.learning_rate = lr;
    c.use_autoencoder = use_ae;
    c.ae_epochs = 1000;
    c.encoder_dim = 19;
    c.seed = base_seed;
    grid.push_back(c);
  };
  add(150, 1000, 0.1, false);
  add(6000, 300, 0.1, false);
  add(6000, 1000, 0.1, false);
  add(6000, 300, 0.1, true);
  add(6000, 500, 0.1, true);
  add(6000, 1000, 0.1, true);
  add(6000, 5000, 0.1, true);
  add(6000, 300, 0.01, true);
  add(6000, 300, 0.5, true);
  return grid;
}

namespace {

void subsample(const FeatureMatrix& features, const LabelVector& labels,
               std::size_t n_wanted, std::uint64_t seed, FeatureMatrix& out_x,
               LabelVector& out_y) {
  if (n_wanted > features.n_patterns)
    throw std::invalid_argument("grid row wants " + std::to_string(n_wanted) +
                                " training patterns, only " +
                                std::to_string(features.n_patterns) + " available");
  if (n_wanted == features.n_patterns) {
    out_x = features;
    out_y = labels;
    return;
  }
  Rng rng(seed);
  auto order = rng.permutation(features.n_patterns);
  order.resize(n_wanted);
  std::sort(order.begin(), order.end());
  out_x = FeatureMatrix(n_wanted, features.n_features);
  out_y.values.reserve(n_wanted);
  for (std::size_t k = 0; k < n_wanted; ++k) {
    const auto src = features.row(order[k]);
    std::copy(src.begin(), src.end(), out_x.row(k).begin());
    out_y.values.push_back(labels[order[k]]);
  }
}

}  // namespace

std::vector<ExperimentResult> run_experiment_grid(
    const FeatureMatrix& train_features, const LabelVector& train_labels,
    const FeatureMatrix& validation_features, const LabelVector& validation_labels,
    const std::vector<ExperimentConfig>& grid) {
  if (grid.empty()) throw std::invalid_argument("empty experiment grid");

  std::vector<ExperimentResult> results;
  results.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    ExperimentResult res;
    res.row = k + 1;
    res.config = grid[k];
    res.config.seed = grid[k].seed + k;
    try {
      FeatureMatrix sub_x;
      LabelVector sub_y;
      subsample(train_features, train_labels, res.config.n_inputs,
                derive_seed(res.config.seed, 3), sub_x, sub_y);
      if (res.config.use_autoencoder) {
        auto r = train_deep(sub_x, sub_y, validation_features, validation_labels,
                            res.config);
        res.final_error = r.classifier_trace.epoch_mse.back();
        res.stable = is_stable(r.classifier_trace);
        res.val_accuracy_pct = r.validation.accuracy * 100.0;
      } else {
        auto r = train_shallow(sub_x, sub_y, validation_features,
                               validation_labels, res.config);
        res.final_error = r.trace.epoch_mse.back();
        res.stable = is_stable(r.trace);
        res.val_accuracy_pct = r.validation.accuracy * 100.0;
      }
      res.performance_pct = error_to_performance(res.final_error);
      res.ok = true;
    } catch (const std::exception& e) {
      res.ok = false;
      res.message = e.what();
    }
    results.push_back(std::move(res));
  }
  return results;
}

std::string results_to_csv(const std::vector<ExperimentResult>& results) {
  std::string csv =
      "row,n_inputs,epochs,lr,autoencoder,final_error,performance_pct,"
      "val_accuracy_pct,stable\n";
  for (const auto& r : results) {
    csv += std::to_string(r.row) + ',' + std::to_string(r.config.n_inputs) + ',' +
           std::to_string(r.config.epochs) + ',' +
           format_double(r.config.learning_rate) + ',' +
           (r.config.use_autoencoder ? "yes" : "no") + ',';
    if (r.ok) {
      csv += format_double(r.final_error) + ',' +
             format_fixed(r.performance_pct, 2) + ',' +
             format_fixed(r.val_accuracy_pct, 2) + ',' +
             (r.stable ? "yes" : "no");
    } else {
      std::string msg = r.message;
      for (auto& c : msg)
        if (c == ',' || c == '\n') c = ';';
      csv += "nan,nan,nan,error: " + msg;
    }
    csv += '\n';
  }
  return csv;
}

}  // namespace flowids

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowids/autoencoder.hpp"
#include "flowids/dataset.hpp"
#include "flowids/evaluation.hpp"
#include "flowids/mlp.hpp"

namespace flowids {

// Classifier hidden layer width, shared by the shallow and deep topologies.
inline constexpr std::size_t kHiddenUnits = 11;

// One experiment: training-set size, budget, learning rate and whether the
// frozen-encoder front end is used.
struct ExperimentConfig {
  std::size_t n_inputs = 0;  // training patterns consumed (seeded subsample)
  std::size_t epochs = 1;
  double learning_rate = 0.1;
  bool use_autoencoder = false;
  std::size_t ae_epochs = 1000;  // ignored when use_autoencoder is false
  std::size_t encoder_dim = 19;
  std::uint64_t seed = 1;
};

// End-to-end scoring chain: normalizer -> optional frozen encoder ->
// sigmoid classifier -> threshold.
struct DeepModel {
  Normalizer normalizer;
  std::optional<AutoencoderModel> encoder;
  MlpModel classifier;
  double threshold = 0.5;
};

struct ShallowTrainResult {
  DeepModel model;
  TrainTrace trace;
  Metrics validation;
};

struct DeepTrainResult {
  DeepModel model;
  TrainTrace classifier_trace;
  TrainTrace autoencoder_trace;
  Metrics validation;
};

// Trains an [n_features, 11, 1] classifier on the raw training data.
// The normalizer is fitted on the training features unless a pre-fitted one
// is supplied; validation metrics come from end-to-end scoring of the raw
// validation rows.
ShallowTrainResult train_shallow(const FeatureMatrix& train_features,
                                 const LabelVector& train_labels,
                                 const FeatureMatrix& validation_features,
                                 const LabelVector& validation_labels,
                                 const ExperimentConfig& config,
                                 const std::optional<Normalizer>& normalizer = {});

// Deep pipeline: (1) pretrain the autoencoder on unlabelled training
// features, (2) encode everything through the frozen encoder, (3) train an
// [encoder_dim, 11, 1] classifier on the codes, (4) evaluate end to end.
DeepTrainResult train_deep(const FeatureMatrix& train_features,
                           const LabelVector& train_labels,
                           const FeatureMatrix& validation_features,
                           const LabelVector& validation_labels,
                           const ExperimentConfig& config,
                           const std::optional<Normalizer>& normalizer = {});

struct ScoreResult {
  double probability = 0.0;
  int label = 0;
};

// Scores one raw (unnormalized) pattern. Throws on dimension mismatch or a
// non-finite input value.
ScoreResult score(const DeepModel& model, std::span<const double> raw_pattern);
std::vector<ScoreResult> score_all(const DeepModel& model, const FeatureMatrix& raw);

// (1 - error) * 100, the summary percentage paired with a training error.
inline double error_to_performance(double error) { return (1.0 - error) * 100.0; }

// A run is stable when the last quartile of its epoch errors stays within a
// 0.02 peak-to-trough band.
bool is_stable(const TrainTrace& trace);
inline constexpr double kStableSpreadLimit = 0.02;

struct ExperimentResult {
  std::size_t row = 0;  // 1-based position in the grid
  ExperimentConfig config;
  bool ok = false;
  std::string message;  // failure description when !ok
  double final_error = 0.0;
  double performance_pct = 0.0;
  double val_accuracy_pct = 0.0;
  bool stable = false;
};

// The built-in 9-row preset sweeping input size, epochs, learning rate and
// the autoencoder toggle. All rows share `base_seed`; the grid runner
// offsets it per row.
std::vector<ExperimentConfig> table1_grid(std::uint64_t base_seed = 1);

// Runs every config against the given training/validation data. Row k uses
// effective seed config.seed + k so rows are independent but reproducible,
// and subsamples the training split down to n_inputs patterns. A failing
// row is recorded and does not abort the rest.
std::vector<ExperimentResult> run_experiment_grid(
    const FeatureMatrix& train_features, const LabelVector& train_labels,
    const FeatureMatrix& validation_features, const LabelVector& validation_labels,
    const std::vector<ExperimentConfig>& grid);

// CSV with header row,n_inputs,epochs,lr,autoencoder,final_error,
// performance_pct,val_accuracy_pct,stable
std::string results_to_csv(const std::vector<ExperimentResult>& results);

}  // namespace flowids

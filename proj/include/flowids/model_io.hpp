#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flowids/pipeline.hpp"

namespace flowids {

// Training provenance carried inside a saved model. The dataset fingerprint
// is a content hash of the training CSV so evaluation can warn when it is
// pointed back at the data the model was trained on.
struct ModelProvenance {
  std::uint64_t seed = 1;
  std::size_t epochs = 0;
  double learning_rate = 0.0;
  std::size_t ae_epochs = 0;  // 0 for shallow models
  std::string dataset_fingerprint;
};

// On-disk model: a versioned JSON document holding the normalizer, the
// optional autoencoder, the classifier and the decision threshold.
// save -> load -> save is byte-identical; every real number is written in
// its shortest form that parses back to the same double.
struct ModelFile {
  int format_version = 1;
  std::string kind;  // "shallow" or "deep"
  DeepModel model;
  ModelProvenance provenance;
};

inline constexpr int kModelFormatVersion = 1;

ModelFile make_model_file(DeepModel model, ModelProvenance provenance);

void save_model(const ModelFile& file, const std::string& path);

// Validates format_version and every shape invariant (weight matrix
// dimensions, bias lengths, the normalizer/encoder/classifier chain) before
// returning; errors name the offending block.
ModelFile load_model(const std::string& path);

// Normalizer sidecar written by dataset preparation.
void save_normalizer(const Normalizer& norm,
                     const std::vector<std::string>& feature_names,
                     const std::string& path);
Normalizer load_normalizer(const std::string& path);

// FNV-1a 64-bit over the file's bytes, as 16 hex digits.
std::string file_fingerprint(const std::string& path);

// Trace CSV: header `<epoch_column>,mse`, one row per epoch, epochs counted
// from 1, LF line endings.
void write_trace_csv(const TrainTrace& trace, const std::string& path,
                     const std::string& epoch_column = "epoch");

}  // namespace flowids

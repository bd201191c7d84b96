#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "flowids/dataset.hpp"
#include "flowids/mlp.hpp"

namespace flowids {

// Symmetric bottleneck autoencoder: input_dim -> code_dim -> input_dim,
// sigmoid on both layers, untied encoder/decoder weights. The trained
// encoder is the feature compressor for the deep pipeline; the decoder
// exists to define reconstruction error.
struct AutoencoderModel {
  MlpModel net;  // layer_sizes = {input_dim, code_dim, input_dim}

  std::size_t input_dim() const { return net.layer_sizes[0]; }
  std::size_t code_dim() const { return net.layer_sizes[1]; }

  const Matrix& encoder_weights() const { return net.weights[0]; }
  const std::vector<double>& encoder_bias() const { return net.biases[0]; }
  const Matrix& decoder_weights() const { return net.weights[1]; }
  const std::vector<double>& decoder_bias() const { return net.biases[1]; }
};

// Trains encoder and decoder jointly by online backprop on the per-pattern
// reconstruction error (mean over features of the squared residual), with a
// fresh random pattern order each epoch. Labels are never consulted.
std::pair<AutoencoderModel, TrainTrace> train_autoencoder(
    const FeatureMatrix& features, std::size_t code_dim, std::size_t epochs,
    double learning_rate, std::uint64_t seed);

// sigmoid(W_enc^T x + b), length code_dim, each component in (0, 1).
std::vector<double> encode(const AutoencoderModel& model,
                           std::span<const double> pattern);

// sigmoid(W_dec^T c + b), length input_dim.
std::vector<double> decode(const AutoencoderModel& model,
                           std::span<const double> code);

// Encodes every row; the deep pipeline precomputes codes once since the
// encoder is frozen after pretraining.
FeatureMatrix encode_all(const AutoencoderModel& model, const FeatureMatrix& features);

// Mean over patterns and features of the squared reconstruction residual.
double reconstruction_error(const AutoencoderModel& model,
                            const FeatureMatrix& features);

}  // namespace flowids

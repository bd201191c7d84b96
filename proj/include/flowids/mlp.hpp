#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "flowids/dataset.hpp"

namespace flowids {

// Logistic transfer function g(h) = 1 / (1 + exp(-beta * h)).
inline double sigmoid(double h, double beta = 1.0) {
  return 1.0 / (1.0 + std::exp(-beta * h));
}

// fan_in x fan_out weight matrix, row-major: (i, j) connects input unit i
// to output unit j.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Fully connected sigmoid network. weights[k] maps layer k to layer k+1;
// biases[k] belongs to layer k+1.
struct MlpModel {
  std::vector<std::size_t> layer_sizes;
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
  double beta = 1.0;

  std::size_t input_size() const { return layer_sizes.front(); }
  std::size_t output_size() const { return layer_sizes.back(); }
  std::size_t parameter_count() const;
};

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 1;
  std::uint64_t seed = 1;
  bool shuffle_each_epoch = true;
};

// Per-epoch mean of the per-pattern errors, measured before each pattern's
// update (a running training error).
struct TrainTrace {
  std::vector<double> epoch_mse;
};

struct ForwardResult {
  // activations[0] is the input pattern; activations.back() the output layer.
  std::vector<std::vector<double>> activations;
  // Scalar reading of the output layer (first output unit).
  double output = 0.0;
};

// All weights and biases drawn uniformly from [-1, 1) with the seeded
// generator; the same seed reproduces the model bit for bit.
MlpModel init_model(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed);

ForwardResult forward(const MlpModel& model, std::span<const double> pattern);

// One online gradient step on the single-pattern squared error, averaged
// over output units: L = (1/D) * sum_d (y_d - z_d)^2. Updates weights and
// biases in place and returns L measured before the update.
double backprop_update(MlpModel& model, std::span<const double> pattern,
                       std::span<const double> target, double learning_rate);

// Binary-target convenience overload (single output unit).
double backprop_update(MlpModel& model, std::span<const double> pattern,
                       double target, double learning_rate);

// Online training core: visits every pattern exactly once per epoch in a
// fresh seeded permutation, applying backprop_update. Targets are rows of
// `targets` (same row count as `inputs`).
TrainTrace train_online(MlpModel& model, const FeatureMatrix& inputs,
                        const FeatureMatrix& targets, const TrainConfig& config);

// Classifier training over binary labels.
TrainTrace train(MlpModel& model, const FeatureMatrix& features,
                 const LabelVector& labels, const TrainConfig& config);

double predict_probability(const MlpModel& model, std::span<const double> pattern);

// 1 iff probability is strictly greater than the threshold.
inline int classify(double probability, double threshold = 0.5) {
  return probability > threshold ? 1 : 0;
}

// (1/N) * sum (y_i - z_i)^2
double mean_squared_error(std::span<const double> outputs,
                          std::span<const double> targets);

}  // namespace flowids

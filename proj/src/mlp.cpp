#include "flowids/mlp.hpp"

#include <stdexcept>
#include <string>

#include "flowids/rng.hpp"

namespace flowids {

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& w : weights) n += w.data.size();
  for (const auto& b : biases) n += b.size();
  return n;
}

MlpModel init_model(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed) {
  if (layer_sizes.size() < 2)
    throw std::invalid_argument("a network needs at least an input and an output layer");
  for (const auto s : layer_sizes)
    if (s == 0) throw std::invalid_argument("layer sizes must be positive");

  MlpModel model;
  model.layer_sizes = layer_sizes;
  Rng rng(seed);
  for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
    Matrix w(layer_sizes[k], layer_sizes[k + 1]);
    for (auto& v : w.data) v = rng.uniform_symmetric();
    model.weights.push_back(std::move(w));
    std::vector<double> b(layer_sizes[k + 1]);
    for (auto& v : b) v = rng.uniform_symmetric();
    model.biases.push_back(std::move(b));
  }
  return model;
}

namespace {

void check_input(const MlpModel& model, std::span<const double> pattern) {
  if (pattern.size() != model.input_size())
    throw std::invalid_argument("pattern has " + std::to_string(pattern.size()) +
                                " values, network expects " +
                                std::to_string(model.input_size()));
}

void forward_into(const MlpModel& model, std::span<const double> pattern,
                  std::vector<std::vector<double>>& activations) {
  activations.resize(model.layer_sizes.size());
  activations[0].assign(pattern.begin(), pattern.end());
  for (std::size_t k = 0; k + 1 < model.layer_sizes.size(); ++k) {
    const Matrix& w = model.weights[k];
    const auto& prev = activations[k];
    auto& next = activations[k + 1];
    next.assign(model.layer_sizes[k + 1], 0.0);
    for (std::size_t i = 0; i < w.rows; ++i) {
      const double a = prev[i];
      const double* wrow = w.data.data() + i * w.cols;
      for (std::size_t j = 0; j < w.cols; ++j) next[j] += a * wrow[j];
    }
    for (std::size_t j = 0; j < w.cols; ++j)
      next[j] = sigmoid(next[j] + model.biases[k][j], model.beta);
  }
}

}  // namespace

ForwardResult forward(const MlpModel& model, std::span<const double> pattern) {
  check_input(model, pattern);
  ForwardResult result;
  forward_into(model, pattern, result.activations);
  result.output = result.activations.back()[0];
  return result;
}

double backprop_update(MlpModel& model, std::span<const double> pattern,
                       std::span<const double> target, double learning_rate) {
  check_input(model, pattern);
  if (target.size() != model.output_size())
    throw std::invalid_argument("target has " + std::to_string(target.size()) +
                                " values, network outputs " +
                                std::to_string(model.output_size()));

  thread_local std::vector<std::vector<double>> activations;
  forward_into(model, pattern, activations);

  const std::size_t n_layers = model.layer_sizes.size();
  const auto& out = activations[n_layers - 1];
  const double inv_dim = 1.0 / static_cast<double>(out.size());

  // Pre-update error: mean over output units of the squared residual.
  double loss = 0.0;
  for (std::size_t d = 0; d < out.size(); ++d) {
    const double r = out[d] - target[d];
    loss += r * r;
  }
  loss *= inv_dim;

  // delta[j] = dL/dh_j, using g'(h) = beta * g * (1 - g).
  thread_local std::vector<std::vector<double>> deltas;
  deltas.resize(n_layers);
  auto& out_delta = deltas[n_layers - 1];
  out_delta.assign(out.size(), 0.0);
  for (std::size_t d = 0; d < out.size(); ++d) {
    out_delta[d] = 2.0 * inv_dim * (out[d] - target[d]) * model.beta * out[d] *
                   (1.0 - out[d]);
  }
  for (std::size_t k = n_layers - 1; k-- > 1;) {
    const Matrix& w = model.weights[k];
    const auto& next_delta = deltas[k + 1];
    auto& here = deltas[k];
    here.assign(model.layer_sizes[k], 0.0);
    for (std::size_t i = 0; i < w.rows; ++i) {
      double acc = 0.0;
      const double* wrow = w.data.data() + i * w.cols;
      for (std::size_t j = 0; j < w.cols; ++j) acc += wrow[j] * next_delta[j];
      const double a = activations[k][i];
      here[i] = acc * model.beta * a * (1.0 - a);
    }
  }

  // Gradient step: dL/dw_ij = a_i * delta_j, dL/db_j = delta_j.
  for (std::size_t k = 0; k + 1 < n_layers; ++k) {
    Matrix& w = model.weights[k];
    const auto& prev = activations[k];
    const auto& delta = deltas[k + 1];
    for (std::size_t i = 0; i < w.rows; ++i) {
      const double step = learning_rate * prev[i];
      double* wrow = w.data.data() + i * w.cols;
      for (std::size_t j = 0; j < w.cols; ++j) wrow[j] -= step * delta[j];
    }
    auto& b = model.biases[k];
    for (std::size_t j = 0; j < b.size(); ++j) b[j] -= learning_rate * delta[j];
  }
  return loss;
}

double backprop_update(MlpModel& model, std::span<const double> pattern,
                       double target, double learning_rate) {
  return backprop_update(model, pattern, std::span<const double>{&target, 1},
                         learning_rate);
}

TrainTrace train_online(MlpModel& model, const FeatureMatrix& inputs,
                        const FeatureMatrix& targets, const TrainConfig& config) {
  if (inputs.n_patterns == 0) throw std::invalid_argument("empty training set");
  if (targets.n_patterns != inputs.n_patterns)
    throw std::invalid_argument("inputs and targets are not aligned");
  if (config.learning_rate <= 0.0)
    throw std::invalid_argument("learning rate must be positive");
  if (config.epochs == 0) throw std::invalid_argument("epochs must be at least 1");
  check_input(model, inputs.row(0));

  Rng rng(config.seed);
  std::vector<std::size_t> order(inputs.n_patterns);
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainTrace trace;
  trace.epoch_mse.reserve(config.epochs);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle_each_epoch) rng.shuffle(order);
    double total = 0.0;
    for (const auto idx : order) {
      total += backprop_update(model, inputs.row(idx), targets.row(idx),
                               config.learning_rate);
    }
    trace.epoch_mse.push_back(total / static_cast<double>(inputs.n_patterns));
  }
  return trace;
}

TrainTrace train(MlpModel& model, const FeatureMatrix& features,
                 const LabelVector& labels, const TrainConfig& config) {
  if (labels.size() != features.n_patterns)
    throw std::invalid_argument("features and labels are not aligned");
  if (model.output_size() != 1)
    throw std::invalid_argument("binary training expects a single output unit");
  FeatureMatrix targets(features.n_patterns, 1);
  for (std::size_t i = 0; i < labels.size(); ++i)
    targets.at(i, 0) = static_cast<double>(labels[i]);
  return train_online(model, features, targets, config);
}

double predict_probability(const MlpModel& model, std::span<const double> pattern) {
  return forward(model, pattern).output;
}

double mean_squared_error(std::span<const double> outputs,
                          std::span<const double> targets) {
  if (outputs.size() != targets.size())
    throw std::invalid_argument("outputs and targets differ in length");
  if (outputs.empty()) throw std::invalid_argument("mean over an empty set");
  double total = 0.0;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const double r = outputs[i] - targets[i];
    total += r * r;
  }
  return total / static_cast<double>(outputs.size());
}

}  // namespace flowids

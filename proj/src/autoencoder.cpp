#include "flowids/autoencoder.hpp"

#include <stdexcept>

namespace flowids {

std::pair<AutoencoderModel, TrainTrace> train_autoencoder(
    const FeatureMatrix& features, std::size_t code_dim, std::size_t epochs,
    double learning_rate, std::uint64_t seed) {
  if (features.n_patterns == 0) throw std::invalid_argument("empty training set");
  if (code_dim == 0) throw std::invalid_argument("code dimension must be positive");
  if (code_dim >= features.n_features)
    throw std::invalid_argument("code dimension must be smaller than the feature count");

  AutoencoderModel model;
  model.net = init_model({features.n_features, code_dim, features.n_features}, seed);

  TrainConfig config;
  config.learning_rate = learning_rate;
  config.epochs = epochs;
  config.seed = seed;
  TrainTrace trace = train_online(model.net, features, features, config);
  return {std::move(model), std::move(trace)};
}

std::vector<double> encode(const AutoencoderModel& model,
                           std::span<const double> pattern) {
  if (pattern.size() != model.input_dim())
    throw std::invalid_argument("pattern length does not match encoder input");
  const Matrix& w = model.encoder_weights();
  std::vector<double> code(model.code_dim(), 0.0);
  for (std::size_t i = 0; i < w.rows; ++i) {
    const double a = pattern[i];
    for (std::size_t j = 0; j < w.cols; ++j) code[j] += a * w(i, j);
  }
  for (std::size_t j = 0; j < code.size(); ++j)
    code[j] = sigmoid(code[j] + model.encoder_bias()[j], model.net.beta);
  return code;
}

std::vector<double> decode(const AutoencoderModel& model,
                           std::span<const double> code) {
  if (code.size() != model.code_dim())
    throw std::invalid_argument("code length does not match decoder input");
  const Matrix& w = model.decoder_weights();
  std::vector<double> out(model.input_dim(), 0.0);
  for (std::size_t i = 0; i < w.rows; ++i) {
    const double a = code[i];
    for (std::size_t j = 0; j < w.cols; ++j) out[j] += a * w(i, j);
  }
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = sigmoid(out[j] + model.decoder_bias()[j], model.net.beta);
  return out;
}

FeatureMatrix encode_all(const AutoencoderModel& model, const FeatureMatrix& features) {
  FeatureMatrix codes(features.n_patterns, model.code_dim());
  for (std::size_t i = 0; i < features.n_patterns; ++i) {
    const auto code = encode(model, features.row(i));
    std::copy(code.begin(), code.end(), codes.row(i).begin());
  }
  return codes;
}

double reconstruction_error(const AutoencoderModel& model,
                            const FeatureMatrix& features) {
  if (features.n_patterns == 0) throw std::invalid_argument("empty feature matrix");
  if (features.n_features != model.input_dim())
    throw std::invalid_argument("feature count does not match autoencoder input");
  double total = 0.0;
  for (std::size_t i = 0; i < features.n_patterns; ++i) {
    const auto reconstructed = decode(model, encode(model, features.row(i)));
    const auto original = features.row(i);
    for (std::size_t j = 0; j < reconstructed.size(); ++j) {
      const double r = reconstructed[j] - original[j];
      total += r * r;
    }
  }
  return total / static_cast<double>(features.n_patterns * features.n_features);
}

}  // namespace flowids

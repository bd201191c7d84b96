#include "flowids/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "flowids/format.hpp"

namespace flowids {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, std::size_t rows, std::size_t cols,
                        const std::string& block) {
  if (!j.is_array() || j.size() != rows)
    throw std::runtime_error(block + ": expected " + std::to_string(rows) +
                             " rows, found " +
                             std::to_string(j.is_array() ? j.size() : 0));
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != cols)
      throw std::runtime_error(block + ": row " + std::to_string(i) +
                               " expected " + std::to_string(cols) + " values");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = row[c].get<double>();
  }
  return m;
}

std::vector<double> vector_from_json(const json& j, std::size_t n,
                                     const std::string& block) {
  if (!j.is_array() || j.size() != n)
    throw std::runtime_error(block + ": expected " + std::to_string(n) +
                             " values, found " +
                             std::to_string(j.is_array() ? j.size() : 0));
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = j[i].get<double>();
  return v;
}

const json& require(const json& j, const char* key, const std::string& context) {
  const auto it = j.find(key);
  if (it == j.end())
    throw std::runtime_error(context + ": missing field \"" + key + "\"");
  return *it;
}

json normalizer_to_json(const Normalizer& norm) {
  return json{{"min", norm.col_min}, {"max", norm.col_max}};
}

Normalizer normalizer_from_json(const json& j, const std::string& block) {
  Normalizer norm;
  const auto& jmin = require(j, "min", block);
  const auto& jmax = require(j, "max", block);
  if (!jmin.is_array() || !jmax.is_array() || jmin.size() != jmax.size())
    throw std::runtime_error(block + ": min/max length mismatch");
  norm.col_min = vector_from_json(jmin, jmin.size(), block + ".min");
  norm.col_max = vector_from_json(jmax, jmax.size(), block + ".max");
  for (std::size_t i = 0; i < norm.col_min.size(); ++i) {
    if (norm.col_min[i] > norm.col_max[i])
      throw std::runtime_error(block + ": min > max in column " + std::to_string(i));
  }
  return norm;
}

json classifier_to_json(const MlpModel& m) {
  json weights = json::array();
  for (const auto& w : m.weights) weights.push_back(matrix_to_json(w));
  json biases = json::array();
  for (const auto& b : m.biases) biases.push_back(b);
  return json{{"layer_sizes", m.layer_sizes},
              {"beta", m.beta},
              {"weights", std::move(weights)},
              {"biases", std::move(biases)}};
}

MlpModel classifier_from_json(const json& j, const std::string& block) {
  MlpModel m;
  const auto& sizes = require(j, "layer_sizes", block);
  if (!sizes.is_array() || sizes.size() < 2)
    throw std::runtime_error(block + ": layer_sizes needs at least two entries");
  for (const auto& s : sizes) m.layer_sizes.push_back(s.get<std::size_t>());
  m.beta = require(j, "beta", block).get<double>();
  if (!(m.beta > 0.0)) throw std::runtime_error(block + ": beta must be positive");

  const auto& weights = require(j, "weights", block);
  const auto& biases = require(j, "biases", block);
  const std::size_t n_layers = m.layer_sizes.size();
  if (!weights.is_array() || weights.size() != n_layers - 1)
    throw std::runtime_error(block + ".weights: expected " +
                             std::to_string(n_layers - 1) + " matrices");
  if (!biases.is_array() || biases.size() != n_layers - 1)
    throw std::runtime_error(block + ".biases: expected " +
                             std::to_string(n_layers - 1) + " vectors");
  for (std::size_t k = 0; k + 1 < n_layers; ++k) {
    m.weights.push_back(matrix_from_json(weights[k], m.layer_sizes[k],
                                         m.layer_sizes[k + 1],
                                         block + ".weights[" + std::to_string(k) + "]"));
    m.biases.push_back(vector_from_json(biases[k], m.layer_sizes[k + 1],
                                        block + ".biases[" + std::to_string(k) + "]"));
  }
  return m;
}

json autoencoder_to_json(const AutoencoderModel& ae) {
  return json{{"input_dim", ae.input_dim()},
              {"code_dim", ae.code_dim()},
              {"beta", ae.net.beta},
              {"encoder_weights", matrix_to_json(ae.encoder_weights())},
              {"encoder_bias", ae.encoder_bias()},
              {"decoder_weights", matrix_to_json(ae.decoder_weights())},
              {"decoder_bias", ae.decoder_bias()}};
}

AutoencoderModel autoencoder_from_json(const json& j, const std::string& block) {
  const auto input_dim = require(j, "input_dim", block).get<std::size_t>();
  const auto code_dim = require(j, "code_dim", block).get<std::size_t>();
  if (code_dim == 0 || code_dim >= input_dim)
    throw std::runtime_error(block + ": code_dim must be in (0, input_dim)");
  AutoencoderModel ae;
  ae.net.layer_sizes = {input_dim, code_dim, input_dim};
  ae.net.beta = require(j, "beta", block).get<double>();
  if (!(ae.net.beta > 0.0))
    throw std::runtime_error(block + ": beta must be positive");
  ae.net.weights.push_back(matrix_from_json(require(j, "encoder_weights", block),
                                            input_dim, code_dim,
                                            block + ".encoder_weights"));
  ae.net.biases.push_back(vector_from_json(require(j, "encoder_bias", block),
                                           code_dim, block + ".encoder_bias"));
  ae.net.weights.push_back(matrix_from_json(require(j, "decoder_weights", block),
                                            code_dim, input_dim,
                                            block + ".decoder_weights"));
  ae.net.biases.push_back(vector_from_json(require(j, "decoder_bias", block),
                                           input_dim, block + ".decoder_bias"));
  return ae;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("failed while writing: " + path);
}

json parse_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(std::string("cannot open ") + what + ": " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed ") + what + " " + path + ": " +
                             e.what());
  }
  return j;
}

}  // namespace

ModelFile make_model_file(DeepModel model, ModelProvenance provenance) {
  ModelFile file;
  file.kind = model.encoder ? "deep" : "shallow";
  file.model = std::move(model);
  file.provenance = std::move(provenance);
  return file;
}

void save_model(const ModelFile& file, const std::string& path) {
  json j{{"format_version", file.format_version},
         {"kind", file.kind},
         {"normalizer", normalizer_to_json(file.model.normalizer)},
         {"classifier", classifier_to_json(file.model.classifier)},
         {"threshold", file.model.threshold},
         {"provenance",
          json{{"seed", file.provenance.seed},
               {"epochs", file.provenance.epochs},
               {"learning_rate", file.provenance.learning_rate},
               {"ae_epochs", file.provenance.ae_epochs},
               {"dataset_fingerprint", file.provenance.dataset_fingerprint}}}};
  if (file.model.encoder)
    j["autoencoder"] = autoencoder_to_json(*file.model.encoder);
  write_text_file(path, j.dump(2) + "\n");
}

ModelFile load_model(const std::string& path) {
  const json j = parse_file(path, "model file");
  const std::string context = "model file " + path;

  const int version = require(j, "format_version", context).get<int>();
  if (version != kModelFormatVersion)
    throw std::runtime_error(context + ": unsupported format_version " +
                             std::to_string(version) + " (expected " +
                             std::to_string(kModelFormatVersion) + ")");

  ModelFile file;
  file.format_version = version;
  file.kind = require(j, "kind", context).get<std::string>();
  if (file.kind != "shallow" && file.kind != "deep")
    throw std::runtime_error(context + ": unknown kind \"" + file.kind + "\"");

  file.model.normalizer = normalizer_from_json(require(j, "normalizer", context),
                                               "normalizer");
  file.model.classifier = classifier_from_json(require(j, "classifier", context),
                                               "classifier");
  file.model.threshold = require(j, "threshold", context).get<double>();
  if (!(file.model.threshold >= 0.0 && file.model.threshold <= 1.0))
    throw std::runtime_error(context + ": threshold must lie in [0, 1]");

  if (file.kind == "deep") {
    file.model.encoder =
        autoencoder_from_json(require(j, "autoencoder", context), "autoencoder");
    if (file.model.encoder->input_dim() != file.model.normalizer.n_features())
      throw std::runtime_error(
          "autoencoder: input_dim does not match the normalizer feature count");
    if (file.model.classifier.input_size() != file.model.encoder->code_dim())
      throw std::runtime_error(
          "classifier: input layer does not match the encoder code_dim");
  } else {
    if (j.contains("autoencoder"))
      throw std::runtime_error(context + ": shallow model carries an autoencoder block");
    if (file.model.classifier.input_size() != file.model.normalizer.n_features())
      throw std::runtime_error(
          "classifier: input layer does not match the normalizer feature count");
  }

  const auto& prov = require(j, "provenance", context);
  file.provenance.seed = require(prov, "seed", "provenance").get<std::uint64_t>();
  file.provenance.epochs = require(prov, "epochs", "provenance").get<std::size_t>();
  file.provenance.learning_rate =
      require(prov, "learning_rate", "provenance").get<double>();
  file.provenance.ae_epochs =
      require(prov, "ae_epochs", "provenance").get<std::size_t>();
  file.provenance.dataset_fingerprint =
      require(prov, "dataset_fingerprint", "provenance").get<std::string>();
  return file;
}

void save_normalizer(const Normalizer& norm,
                     const std::vector<std::string>& feature_names,
                     const std::string& path) {
  json j{{"format_version", kModelFormatVersion},
         {"min", norm.col_min},
         {"max", norm.col_max}};
  if (!feature_names.empty()) {
    if (feature_names.size() != norm.n_features())
      throw std::invalid_argument("feature name count does not match the normalizer");
    j["feature_names"] = feature_names;
  }
  write_text_file(path, j.dump(2) + "\n");
}

Normalizer load_normalizer(const std::string& path) {
  const json j = parse_file(path, "normalizer file");
  const std::string context = "normalizer file " + path;
  const int version = require(j, "format_version", context).get<int>();
  if (version != kModelFormatVersion)
    throw std::runtime_error(context + ": unsupported format_version " +
                             std::to_string(version));
  return normalizer_from_json(j, context);
}

std::string file_fingerprint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[8192];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
  return hex;
}

void write_trace_csv(const TrainTrace& trace, const std::string& path,
                     const std::string& epoch_column) {
  std::string content = epoch_column + ",mse\n";
  for (std::size_t i = 0; i < trace.epoch_mse.size(); ++i)
    content += std::to_string(i + 1) + ',' + format_double(trace.epoch_mse[i]) + '\n';
  write_text_file(path, content);
}

}  // namespace flowids

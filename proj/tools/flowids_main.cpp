#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flowids/dataset.hpp"
#include "flowids/evaluation.hpp"
#include "flowids/format.hpp"
#include "flowids/model_io.hpp"
#include "flowids/pipeline.hpp"

namespace fs = std::filesystem;
using namespace flowids;

namespace {

struct SplitFractions {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

// Accepts "80/10/10" or "0.8/0.1/0.1".
SplitFractions parse_split(const std::string& text) {
  SplitFractions f;
  double a = 0.0, b = 0.0, c = 0.0;
  char sep1 = 0, sep2 = 0;
  std::istringstream in(text);
  if (!(in >> a >> sep1 >> b >> sep2 >> c) || sep1 != '/' || sep2 != '/')
    throw std::runtime_error("cannot parse --split \"" + text +
                             "\", expected A/B/C");
  const double sum = a + b + c;
  if (std::abs(sum - 100.0) < 1e-6) {
    a /= 100.0;
    b /= 100.0;
    c /= 100.0;
  } else if (std::abs(sum - 1.0) > 1e-9) {
    throw std::runtime_error("--split fractions must sum to 1 (or 100)");
  }
  f.train = a;
  f.validation = b;
  f.test = c;
  return f;
}

void write_raw_csv(const RawTable& table, const std::vector<std::size_t>& kept_rows,
                   const std::vector<std::size_t>& part_indices,
                   const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (std::size_t c = 0; c < table.column_names.size(); ++c) {
    if (c) out << ',';
    out << table.column_names[c];
  }
  out << '\n';
  for (const auto idx : part_indices) {
    const auto& cells = table.rows[kept_rows[idx]];
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out << ',';
      out << cells[c];
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed while writing: " + path);
}

struct LoadedSplit {
  FeatureMatrix features;
  LabelVector labels;
};

LoadedSplit load_labelled_csv(const std::string& path, const std::string& label_column) {
  auto table = load_csv(path, label_column);
  auto cleaned = clean(table);
  return {std::move(cleaned.features), std::move(cleaned.labels)};
}

fs::path sibling_trace_path(const fs::path& trace_path) {
  fs::path sibling = trace_path;
  sibling.replace_filename(trace_path.stem().string() + "_ae" +
                           trace_path.extension().string());
  return sibling;
}

int cmd_prepare(const std::string& input, const std::string& label_column,
                const std::string& out_dir, std::uint64_t seed,
                const std::string& split_text) {
  const SplitFractions fractions = parse_split(split_text);

  auto table = load_csv(input, label_column);
  auto cleaned = clean(table);

  SplitSpec spec;
  spec.train_fraction = fractions.train;
  spec.validation_fraction = fractions.validation;
  spec.test_fraction = fractions.test;
  spec.seed = seed;
  auto parts = split(cleaned.features, cleaned.labels, spec);
  for (const auto& w : parts.warnings) std::cerr << "warning: " << w << '\n';

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_raw_csv(table, cleaned.kept_rows, parts.train.indices,
                (dir / "train.csv").string());
  write_raw_csv(table, cleaned.kept_rows, parts.validation.indices,
                (dir / "validation.csv").string());
  write_raw_csv(table, cleaned.kept_rows, parts.test.indices,
                (dir / "test.csv").string());

  // Leakage-free statistics: fitted on the training part only.
  std::vector<std::string> feature_names;
  for (std::size_t c = 0; c < table.column_names.size(); ++c)
    if (c != table.label_column) feature_names.push_back(table.column_names[c]);
  save_normalizer(fit_normalizer(parts.train.features), feature_names,
                  (dir / "normalizer.json").string());

  std::cout << "input rows:      " << table.n_rows() << '\n'
            << "dropped rows:    " << cleaned.dropped_count << '\n'
            << "train rows:      " << parts.train.labels.size() << '\n'
            << "validation rows: " << parts.validation.labels.size() << '\n'
            << "test rows:       " << parts.test.labels.size() << '\n';
  return 0;
}

int cmd_train(const std::string& data_dir, const std::string& arch,
              const std::string& label_column, std::size_t epochs, double lr,
              std::size_t ae_epochs, std::size_t encoder_dim, std::uint64_t seed,
              const std::string& model_out, const std::string& trace_out) {
  if (lr <= 0.0) throw std::runtime_error("--lr must be positive");
  if (epochs == 0) throw std::runtime_error("--epochs must be at least 1");

  const fs::path dir(data_dir);
  const auto train_path = (dir / "train.csv").string();
  auto train_data = load_labelled_csv(train_path, label_column);
  auto val_data = load_labelled_csv((dir / "validation.csv").string(), label_column);

  std::optional<Normalizer> normalizer;
  const auto norm_path = dir / "normalizer.json";
  if (fs::exists(norm_path)) normalizer = load_normalizer(norm_path.string());

  ExperimentConfig config;
  config.n_inputs = train_data.features.n_patterns;
  config.epochs = epochs;
  config.learning_rate = lr;
  config.use_autoencoder = arch == "deep";
  config.ae_epochs = ae_epochs;
  config.encoder_dim = encoder_dim;
  config.seed = seed;

  ModelProvenance provenance;
  provenance.seed = seed;
  provenance.epochs = epochs;
  provenance.learning_rate = lr;
  provenance.ae_epochs = config.use_autoencoder ? ae_epochs : 0;
  provenance.dataset_fingerprint = file_fingerprint(train_path);

  TrainTrace trace;
  Metrics validation;
  DeepModel model;
  if (config.use_autoencoder) {
    auto result = train_deep(train_data.features, train_data.labels,
                             val_data.features, val_data.labels, config, normalizer);
    model = std::move(result.model);
    trace = std::move(result.classifier_trace);
    validation = result.validation;
    if (!trace_out.empty())
      write_trace_csv(result.autoencoder_trace,
                      sibling_trace_path(trace_out).string(), "ae_epoch");
  } else {
    auto result = train_shallow(train_data.features, train_data.labels,
                                val_data.features, val_data.labels, config,
                                normalizer);
    model = std::move(result.model);
    trace = std::move(result.trace);
    validation = result.validation;
  }

  if (!trace_out.empty()) write_trace_csv(trace, trace_out, "epoch");
  save_model(make_model_file(std::move(model), std::move(provenance)), model_out);

  const double final_error = trace.epoch_mse.back();
  std::cout << "final error:         " << format_double(final_error) << '\n'
            << "performance:         "
            << format_fixed(error_to_performance(final_error), 2) << "%\n"
            << "validation accuracy: " << format_fixed(validation.accuracy * 100.0, 2)
            << "%\n"
            << "model written to:    " << model_out << '\n';
  return 0;
}

std::vector<ExperimentConfig> load_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open grid file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed grid file " + path + ": " + e.what());
  }
  if (!j.is_array() || j.empty())
    throw std::runtime_error("grid file must be a non-empty JSON array of configs");
  std::vector<ExperimentConfig> grid;
  for (const auto& row : j) {
    ExperimentConfig c;
    c.n_inputs = row.at("n_inputs").get<std::size_t>();
    c.epochs = row.at("epochs").get<std::size_t>();
    c.learning_rate = row.value("learning_rate", 0.1);
    c.use_autoencoder = row.value("use_autoencoder", false);
    c.ae_epochs = row.value("ae_epochs", std::size_t{1000});
    c.encoder_dim = row.value("encoder_dim", std::size_t{19});
    c.seed = row.value("seed", std::uint64_t{1});
    grid.push_back(c);
  }
  return grid;
}

int cmd_grid(const std::string& data_dir, const std::string& preset,
             const std::string& grid_file, const std::string& label_column,
             std::uint64_t seed, const std::string& out_path) {
  std::vector<ExperimentConfig> grid;
  if (!preset.empty()) {
    if (preset != "table1")
      throw std::runtime_error("unknown preset \"" + preset + "\"");
    grid = table1_grid(seed);
  } else if (!grid_file.empty()) {
    grid = load_grid_file(grid_file);
  } else {
    throw std::runtime_error("either --preset or --grid is required");
  }

  const fs::path dir(data_dir);
  auto train_data = load_labelled_csv((dir / "train.csv").string(), label_column);
  auto val_data = load_labelled_csv((dir / "validation.csv").string(), label_column);

  const auto results = run_experiment_grid(train_data.features, train_data.labels,
                                           val_data.features, val_data.labels, grid);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + out_path);
  out << results_to_csv(results);
  if (!out) throw std::runtime_error("failed while writing: " + out_path);

  std::size_t succeeded = 0;
  for (const auto& r : results) {
    if (r.ok) {
      ++succeeded;
      std::cout << "row " << r.row << ": error=" << format_double(r.final_error)
                << " performance=" << format_fixed(r.performance_pct, 2)
                << "% val_accuracy=" << format_fixed(r.val_accuracy_pct, 2)
                << "% stable=" << (r.stable ? "yes" : "no") << '\n';
    } else {
      std::cout << "row " << r.row << ": failed (" << r.message << ")\n";
    }
  }
  std::cout << "results written to: " << out_path << '\n';
  return succeeded > 0 ? 0 : 1;
}

int cmd_eval(const std::string& model_path, const std::string& data_path,
             const std::string& label_column, double threshold, bool threshold_set,
             const std::string& report_path) {
  auto file = load_model(model_path);
  if (threshold_set) file.model.threshold = threshold;

  if (!file.provenance.dataset_fingerprint.empty() &&
      file_fingerprint(data_path) == file.provenance.dataset_fingerprint) {
    std::cerr << "warning: evaluation data has the same fingerprint as the "
                 "model's training data\n";
  }

  auto data = load_labelled_csv(data_path, label_column);
  const Metrics metrics = evaluate(file.model, data.features, data.labels);

  std::cout << metrics_report_text(metrics);
  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + report_path);
    out << metrics_csv_header() << '\n' << metrics_csv_row(metrics) << '\n';
    if (!out) throw std::runtime_error("failed while writing: " + report_path);
    std::cout << "report written to: " << report_path << '\n';
  }
  return 0;
}

std::vector<double> parse_feature_line(const std::string& line) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= line.size()) {
    const std::size_t pos = line.find(',', start);
    const std::string cell =
        line.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
      throw std::runtime_error("cannot parse feature value \"" + cell + "\"");
    values.push_back(v);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return values;
}

int cmd_predict(const std::string& model_path, const std::string& input_path,
                const std::string& features_line) {
  const auto file = load_model(model_path);

  std::vector<std::vector<double>> rows;
  if (!features_line.empty()) {
    rows.push_back(parse_feature_line(features_line));
  } else {
    std::ifstream in(input_path);
    if (!in) throw std::runtime_error("cannot open file: " + input_path);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (first) {
        first = false;
        // A non-numeric first line is a header; skip it.
        try {
          rows.push_back(parse_feature_line(line));
        } catch (const std::exception&) {
        }
        continue;
      }
      rows.push_back(parse_feature_line(line));
    }
    if (rows.empty()) throw std::runtime_error("no feature rows in " + input_path);
  }

  const std::size_t expected = file.model.normalizer.n_features();
  for (const auto& row : rows) {
    if (row.size() != expected)
      throw std::runtime_error("feature row has " + std::to_string(row.size()) +
                               " values, model expects " + std::to_string(expected));
  }
  for (const auto& row : rows) {
    const auto result = score(file.model, row);
    std::cout << format_double(result.probability) << ',' << result.label << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural-network intrusion detection over network-flow CSV records"};
  app.require_subcommand(1);

  // prepare
  std::string in_path, label_column = "Label", out_dir, split_text = "80/10/10";
  std::uint64_t seed = 1;
  auto* prepare = app.add_subcommand(
      "prepare", "Clean a flow CSV, fit normalization and write seeded splits");
  prepare->add_option("--input", in_path, "Input CSV file")->required();
  prepare->add_option("--label-column", label_column, "Label column name");
  prepare->add_option("--out", out_dir, "Output directory")->required();
  prepare->add_option("--seed", seed, "Split seed");
  prepare->add_option("--split", split_text, "train/validation/test fractions");

  // train
  std::string data_dir, arch = "shallow", model_out, trace_out;
  std::size_t epochs = 1000, ae_epochs = 1000, encoder_dim = 19;
  double lr = 0.1;
  auto* train_cmd = app.add_subcommand("train", "Train a shallow or deep model");
  train_cmd->add_option("--data", data_dir, "Prepared data directory")->required();
  train_cmd->add_option("--arch", arch, "Architecture")
      ->check(CLI::IsMember({"shallow", "deep"}));
  train_cmd->add_option("--label-column", label_column, "Label column name");
  train_cmd->add_option("--epochs", epochs, "Training epochs");
  train_cmd->add_option("--lr", lr, "Learning rate");
  train_cmd->add_option("--ae-epochs", ae_epochs, "Autoencoder pretraining epochs");
  train_cmd->add_option("--encoder-dim", encoder_dim, "Encoder code size");
  train_cmd->add_option("--seed", seed, "Training seed");
  train_cmd->add_option("--model-out", model_out, "Model file to write")->required();
  train_cmd->add_option("--trace-out", trace_out, "Per-epoch error CSV to write");

  // grid
  std::string preset, grid_file, grid_out;
  auto* grid_cmd = app.add_subcommand("grid", "Run an experiment grid");
  grid_cmd->add_option("--data", data_dir, "Prepared data directory")->required();
  grid_cmd->add_option("--preset", preset, "Built-in grid name (table1)");
  grid_cmd->add_option("--grid", grid_file, "JSON grid file");
  grid_cmd->add_option("--label-column", label_column, "Label column name");
  grid_cmd->add_option("--seed", seed, "Base seed");
  grid_cmd->add_option("--out", grid_out, "Results CSV to write")->required();

  // eval
  std::string model_path, eval_data, report_path;
  double threshold = 0.5;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on labelled data");
  eval_cmd->add_option("--model", model_path, "Model file")->required();
  eval_cmd->add_option("--data", eval_data, "Labelled CSV file")->required();
  eval_cmd->add_option("--label-column", label_column, "Label column name");
  auto* threshold_opt =
      eval_cmd->add_option("--threshold", threshold, "Decision threshold");
  eval_cmd->add_option("--report", report_path, "Report CSV to write");

  // predict
  std::string predict_input, features_line;
  auto* predict_cmd =
      app.add_subcommand("predict", "Score unlabelled feature rows");
  predict_cmd->add_option("--model", model_path, "Model file")->required();
  predict_cmd->add_option("--input", predict_input, "CSV of feature rows");
  predict_cmd->add_option("--features", features_line,
                          "Single comma-separated feature row");

  CLI11_PARSE(app, argc, argv);

  try {
    if (prepare->parsed())
      return cmd_prepare(in_path, label_column, out_dir, seed, split_text);
    if (train_cmd->parsed())
      return cmd_train(data_dir, arch, label_column, epochs, lr, ae_epochs,
                       encoder_dim, seed, model_out, trace_out);
    if (grid_cmd->parsed())
      return cmd_grid(data_dir, preset, grid_file, label_column, seed, grid_out);
    if (eval_cmd->parsed())
      return cmd_eval(model_path, eval_data, label_column, threshold,
                      !threshold_opt->empty(), report_path);
    if (predict_cmd->parsed()) {
      if (predict_input.empty() == features_line.empty())
        throw std::runtime_error("exactly one of --input or --features is required");
      return cmd_predict(model_path, predict_input, features_line);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

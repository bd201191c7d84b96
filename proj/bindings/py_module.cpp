#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "flowids/autoencoder.hpp"
#include "flowids/dataset.hpp"
#include "flowids/evaluation.hpp"
#include "flowids/mlp.hpp"
#include "flowids/model_io.hpp"
#include "flowids/pipeline.hpp"

namespace py = pybind11;
using namespace flowids;

namespace {

FeatureMatrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  FeatureMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.n_features)
      throw std::invalid_argument("ragged row " + std::to_string(i));
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

std::vector<std::vector<double>> matrix_to_rows(const FeatureMatrix& m) {
  std::vector<std::vector<double>> rows(m.n_patterns);
  for (std::size_t i = 0; i < m.n_patterns; ++i) {
    const auto r = m.row(i);
    rows[i].assign(r.begin(), r.end());
  }
  return rows;
}

LabelVector labels_from_list(const std::vector<int>& values) {
  LabelVector labels;
  labels.values.reserve(values.size());
  for (const int v : values)
    labels.values.push_back(v != 0 ? 1 : 0);
  return labels;
}

std::vector<int> labels_to_list(const LabelVector& labels) {
  return std::vector<int>(labels.values.begin(), labels.values.end());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Neural-network intrusion detection over network-flow records";

  py::class_<FeatureMatrix>(m, "FeatureMatrix")
      .def(py::init<>())
      .def(py::init(&matrix_from_rows), py::arg("rows"))
      .def_readonly("n_patterns", &FeatureMatrix::n_patterns)
      .def_readonly("n_features", &FeatureMatrix::n_features)
      .def("to_rows", &matrix_to_rows)
      .def("row", [](const FeatureMatrix& self, std::size_t i) {
        if (i >= self.n_patterns) throw py::index_error();
        const auto r = self.row(i);
        return std::vector<double>(r.begin(), r.end());
      });

  py::class_<LabelVector>(m, "LabelVector")
      .def(py::init<>())
      .def(py::init(&labels_from_list), py::arg("values"))
      .def("__len__", &LabelVector::size)
      .def("to_list", &labels_to_list);

  py::class_<RawTable>(m, "RawTable")
      .def_readonly("column_names", &RawTable::column_names)
      .def_readonly("label_column", &RawTable::label_column)
      .def_property_readonly("n_rows", &RawTable::n_rows);

  py::class_<Normalizer>(m, "Normalizer")
      .def(py::init<>())
      .def_readwrite("col_min", &Normalizer::col_min)
      .def_readwrite("col_max", &Normalizer::col_max)
      .def_property_readonly("n_features", &Normalizer::n_features);

  py::class_<SplitSpec>(m, "SplitSpec")
      .def(py::init<>())
      .def_readwrite("train_fraction", &SplitSpec::train_fraction)
      .def_readwrite("validation_fraction", &SplitSpec::validation_fraction)
      .def_readwrite("test_fraction", &SplitSpec::test_fraction)
      .def_readwrite("seed", &SplitSpec::seed)
      .def_readwrite("stratified", &SplitSpec::stratified);

  py::class_<DataSplit>(m, "DataSplit")
      .def_readonly("features", &DataSplit::features)
      .def_readonly("labels", &DataSplit::labels)
      .def_readonly("indices", &DataSplit::indices);

  py::class_<SplitResult>(m, "SplitResult")
      .def_readonly("train", &SplitResult::train)
      .def_readonly("validation", &SplitResult::validation)
      .def_readonly("test", &SplitResult::test)
      .def_readonly("warnings", &SplitResult::warnings);

  m.def("load_csv", &load_csv, py::arg("path"), py::arg("label_column") = "Label");
  m.def(
      "clean",
      [](const RawTable& table) {
        auto r = clean(table);
        return py::make_tuple(std::move(r.features), std::move(r.labels),
                              r.dropped_count);
      },
      py::arg("table"), "Returns (features, labels, dropped_count)");
  m.def("fit_normalizer", &fit_normalizer, py::arg("features"));
  m.def("apply_normalizer", &apply_normalizer, py::arg("normalizer"),
        py::arg("features"));
  m.def("split", &split, py::arg("features"), py::arg("labels"), py::arg("spec"));

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("shuffle_each_epoch", &TrainConfig::shuffle_each_epoch);

  py::class_<TrainTrace>(m, "TrainTrace")
      .def_readonly("epoch_mse", &TrainTrace::epoch_mse)
      .def("__len__", [](const TrainTrace& t) { return t.epoch_mse.size(); });

  py::class_<MlpModel>(m, "MlpModel")
      .def_readonly("layer_sizes", &MlpModel::layer_sizes)
      .def_readonly("beta", &MlpModel::beta)
      .def_property_readonly("parameter_count", &MlpModel::parameter_count);

  m.def("sigmoid", &sigmoid, py::arg("h"), py::arg("beta") = 1.0);
  m.def("init_model", &init_model, py::arg("layer_sizes"), py::arg("seed"));
  m.def(
      "forward",
      [](const MlpModel& model, const std::vector<double>& pattern) {
        auto r = forward(model, pattern);
        return py::make_tuple(r.activations, r.output);
      },
      py::arg("model"), py::arg("pattern"),
      "Returns (activations_per_layer, output)");
  m.def("train", &train, py::arg("model"), py::arg("features"), py::arg("labels"),
        py::arg("config"));
  m.def(
      "predict_probability",
      [](const MlpModel& model, const std::vector<double>& pattern) {
        return predict_probability(model, pattern);
      },
      py::arg("model"), py::arg("pattern"));
  m.def("classify", &classify, py::arg("probability"), py::arg("threshold") = 0.5);
  m.def(
      "mean_squared_error",
      [](const std::vector<double>& outputs, const std::vector<double>& targets) {
        return mean_squared_error(outputs, targets);
      },
      py::arg("outputs"), py::arg("targets"));

  py::class_<AutoencoderModel>(m, "AutoencoderModel")
      .def_property_readonly("input_dim", &AutoencoderModel::input_dim)
      .def_property_readonly("code_dim", &AutoencoderModel::code_dim);

  m.def(
      "train_autoencoder",
      [](const FeatureMatrix& features, std::size_t code_dim, std::size_t epochs,
         double lr, std::uint64_t seed) {
        auto [model, trace] = train_autoencoder(features, code_dim, epochs, lr, seed);
        return py::make_tuple(std::move(model), std::move(trace));
      },
      py::arg("features"), py::arg("code_dim"), py::arg("epochs"),
      py::arg("learning_rate") = 0.1, py::arg("seed") = 1,
      "Returns (model, trace)");
  m.def(
      "encode",
      [](const AutoencoderModel& model, const std::vector<double>& pattern) {
        return encode(model, pattern);
      },
      py::arg("model"), py::arg("pattern"));
  m.def(
      "decode",
      [](const AutoencoderModel& model, const std::vector<double>& code) {
        return decode(model, code);
      },
      py::arg("model"), py::arg("code"));
  m.def("encode_all", &encode_all, py::arg("model"), py::arg("features"));
  m.def("reconstruction_error", &reconstruction_error, py::arg("model"),
        py::arg("features"));

  py::class_<ConfusionMatrix>(m, "ConfusionMatrix")
      .def(py::init([](std::uint64_t tp, std::uint64_t tn, std::uint64_t fp,
                       std::uint64_t fn) {
             ConfusionMatrix c;
             c.tp = tp;
             c.tn = tn;
             c.fp = fp;
             c.fn = fn;
             return c;
           }),
           py::arg("tp") = 0, py::arg("tn") = 0, py::arg("fp") = 0,
           py::arg("fn") = 0)
      .def_readwrite("tp", &ConfusionMatrix::tp)
      .def_readwrite("tn", &ConfusionMatrix::tn)
      .def_readwrite("fp", &ConfusionMatrix::fp)
      .def_readwrite("fn", &ConfusionMatrix::fn)
      .def_property_readonly("total", &ConfusionMatrix::total);

  py::class_<Metrics>(m, "Metrics")
      .def_readonly("sensitivity", &Metrics::sensitivity)
      .def_readonly("specificity", &Metrics::specificity)
      .def_readonly("accuracy", &Metrics::accuracy)
      .def_readonly("sensitivity_degenerate", &Metrics::sensitivity_degenerate)
      .def_readonly("specificity_degenerate", &Metrics::specificity_degenerate)
      .def_readonly("matrix", &Metrics::matrix);

  m.def(
      "confusion",
      [](const std::vector<int>& predictions, const std::vector<int>& targets) {
        return confusion(predictions, labels_from_list(targets));
      },
      py::arg("predictions"), py::arg("targets"));
  m.def("compute_metrics", &compute_metrics, py::arg("matrix"));
  m.def("evaluate", &evaluate, py::arg("model"), py::arg("raw_features"),
        py::arg("labels"));
  m.def("metrics_csv_row", &metrics_csv_row, py::arg("metrics"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("n_inputs", &ExperimentConfig::n_inputs)
      .def_readwrite("epochs", &ExperimentConfig::epochs)
      .def_readwrite("learning_rate", &ExperimentConfig::learning_rate)
      .def_readwrite("use_autoencoder", &ExperimentConfig::use_autoencoder)
      .def_readwrite("ae_epochs", &ExperimentConfig::ae_epochs)
      .def_readwrite("encoder_dim", &ExperimentConfig::encoder_dim)
      .def_readwrite("seed", &ExperimentConfig::seed);

  py::class_<DeepModel>(m, "DeepModel")
      .def_readonly("normalizer", &DeepModel::normalizer)
      .def_readonly("classifier", &DeepModel::classifier)
      .def_readwrite("threshold", &DeepModel::threshold)
      .def_property_readonly("has_encoder", [](const DeepModel& self) {
        return self.encoder.has_value();
      });

  py::class_<ShallowTrainResult>(m, "ShallowTrainResult")
      .def_readonly("model", &ShallowTrainResult::model)
      .def_readonly("trace", &ShallowTrainResult::trace)
      .def_readonly("validation", &ShallowTrainResult::validation);

  py::class_<DeepTrainResult>(m, "DeepTrainResult")
      .def_readonly("model", &DeepTrainResult::model)
      .def_readonly("classifier_trace", &DeepTrainResult::classifier_trace)
      .def_readonly("autoencoder_trace", &DeepTrainResult::autoencoder_trace)
      .def_readonly("validation", &DeepTrainResult::validation);

  py::class_<ScoreResult>(m, "ScoreResult")
      .def_readonly("probability", &ScoreResult::probability)
      .def_readonly("label", &ScoreResult::label);

  m.def("train_shallow", &train_shallow, py::arg("train_features"),
        py::arg("train_labels"), py::arg("validation_features"),
        py::arg("validation_labels"), py::arg("config"),
        py::arg("normalizer") = std::optional<Normalizer>{});
  m.def("train_deep", &train_deep, py::arg("train_features"),
        py::arg("train_labels"), py::arg("validation_features"),
        py::arg("validation_labels"), py::arg("config"),
        py::arg("normalizer") = std::optional<Normalizer>{});
  m.def(
      "score",
      [](const DeepModel& model, const std::vector<double>& raw_pattern) {
        return score(model, raw_pattern);
      },
      py::arg("model"), py::arg("raw_pattern"));
  m.def("score_all", &score_all, py::arg("model"), py::arg("raw"));
  m.def("error_to_performance", &error_to_performance, py::arg("error"));
  m.def("is_stable", &is_stable, py::arg("trace"));
  m.def("table1_grid", &table1_grid, py::arg("base_seed") = 1);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("row", &ExperimentResult::row)
      .def_readonly("config", &ExperimentResult::config)
      .def_readonly("ok", &ExperimentResult::ok)
      .def_readonly("message", &ExperimentResult::message)
      .def_readonly("final_error", &ExperimentResult::final_error)
      .def_readonly("performance_pct", &ExperimentResult::performance_pct)
      .def_readonly("val_accuracy_pct", &ExperimentResult::val_accuracy_pct)
      .def_readonly("stable", &ExperimentResult::stable);

  m.def("run_experiment_grid", &run_experiment_grid, py::arg("train_features"),
        py::arg("train_labels"), py::arg("validation_features"),
        py::arg("validation_labels"), py::arg("grid"));
  m.def("results_to_csv", &results_to_csv, py::arg("results"));

  py::class_<ModelProvenance>(m, "ModelProvenance")
      .def(py::init<>())
      .def_readwrite("seed", &ModelProvenance::seed)
      .def_readwrite("epochs", &ModelProvenance::epochs)
      .def_readwrite("learning_rate", &ModelProvenance::learning_rate)
      .def_readwrite("ae_epochs", &ModelProvenance::ae_epochs)
      .def_readwrite("dataset_fingerprint", &ModelProvenance::dataset_fingerprint);

  py::class_<ModelFile>(m, "ModelFile")
      .def_readonly("format_version", &ModelFile::format_version)
      .def_readonly("kind", &ModelFile::kind)
      .def_readonly("model", &ModelFile::model)
      .def_readonly("provenance", &ModelFile::provenance);

  m.def("make_model_file", &make_model_file, py::arg("model"), py::arg("provenance"));
  m.def("save_model", &save_model, py::arg("file"), py::arg("path"));
  m.def("load_model", &load_model, py::arg("path"));
  m.def("file_fingerprint", &file_fingerprint, py::arg("path"));
}

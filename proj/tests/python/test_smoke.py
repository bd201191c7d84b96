"""Smoke tests for the Python surface of the toolkit."""

import math

import pytest

import flowids


def separable_data(n=80, dims=5, gap=3.0):
    rows, labels = [], []
    # Deterministic pseudo-noise, no RNG dependency needed at this scale.
    for i in range(n):
        attack = i % 2
        base = gap if attack else 1.0
        rows.append([base + 0.3 * math.sin(3.7 * i + j) for j in range(dims)])
        labels.append(attack)
    return flowids.FeatureMatrix(rows), flowids.LabelVector(labels)


def test_normalization_round_trip():
    x, _ = separable_data()
    norm = flowids.fit_normalizer(x)
    out = flowids.apply_normalizer(norm, x)
    values = [v for row in out.to_rows() for v in row]
    assert min(values) >= 0.0
    assert max(values) <= 1.0


def test_split_is_deterministic():
    x, y = separable_data(200)
    spec = flowids.SplitSpec()
    spec.seed = 11
    a = flowids.split(x, y, spec)
    b = flowids.split(x, y, spec)
    assert a.train.indices == b.train.indices
    assert len(a.train.indices) == 160
    assert len(a.validation.indices) == 20
    assert len(a.test.indices) == 20


def test_sigmoid_and_classify():
    assert flowids.sigmoid(0.0) == 0.5
    assert flowids.sigmoid(1.0) == pytest.approx(0.7310585786300049, abs=1e-14)
    assert flowids.classify(0.51) == 1
    assert flowids.classify(0.5) == 0


def test_training_and_scoring():
    x, y = separable_data()
    config = flowids.ExperimentConfig()
    config.epochs = 60
    config.seed = 4
    result = flowids.train_shallow(x, y, x, y, config)
    assert len(result.trace.epoch_mse) == 60
    assert result.validation.accuracy >= 0.95

    scored = flowids.score(result.model, x.row(0))
    assert 0.0 < scored.probability < 1.0
    assert scored.label in (0, 1)


def test_training_determinism():
    x, y = separable_data()
    config = flowids.ExperimentConfig()
    config.epochs = 25
    config.seed = 9
    a = flowids.train_shallow(x, y, x, y, config)
    b = flowids.train_shallow(x, y, x, y, config)
    assert a.trace.epoch_mse == b.trace.epoch_mse


def test_autoencoder_shapes():
    x, _ = separable_data(60, 8)
    norm = flowids.fit_normalizer(x)
    unit = flowids.apply_normalizer(norm, x)
    model, trace = flowids.train_autoencoder(unit, 3, 40, 0.2, seed=2)
    assert model.input_dim == 8
    assert model.code_dim == 3
    code = flowids.encode(model, unit.row(0))
    assert len(code) == 3
    assert len(flowids.decode(model, code)) == 8
    assert len(trace.epoch_mse) == 40


def test_metrics_exact_values():
    m = flowids.ConfusionMatrix(tp=1000, tn=870, fp=130, fn=0)
    metrics = flowids.compute_metrics(m)
    assert metrics.sensitivity == 1.0
    assert metrics.specificity == 0.87
    assert metrics.accuracy == 0.935
    assert flowids.error_to_performance(0.0060) == pytest.approx(99.40)


def test_model_round_trip(tmp_path):
    x, y = separable_data()
    config = flowids.ExperimentConfig()
    config.epochs = 30
    result = flowids.train_shallow(x, y, x, y, config)

    prov = flowids.ModelProvenance()
    prov.seed = 1
    prov.epochs = 30
    prov.learning_rate = 0.1
    file = flowids.make_model_file(result.model, prov)

    path = str(tmp_path / "model.json")
    flowids.save_model(file, path)
    loaded = flowids.load_model(path)
    assert loaded.kind == "shallow"

    for i in range(10):
        a = flowids.score(file.model, x.row(i))
        b = flowids.score(loaded.model, x.row(i))
        assert a.probability == b.probability


def test_clean_drops_bad_rows(tmp_path):
    csv = tmp_path / "flows.csv"
    csv.write_text(
        "a,b,Label\n1,2,BENIGN\nInfinity,2,DoS\n3,4,DDoS\n,5,BENIGN\n"
    )
    table = flowids.load_csv(str(csv), "Label")
    features, labels, dropped = flowids.clean(table)
    assert features.n_patterns == 2
    assert dropped == 2
    assert labels.to_list() == [0, 1]

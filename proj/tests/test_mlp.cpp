#include <doctest.h>

#include <cmath>
#include <set>

#include "flowids/mlp.hpp"
#include "flowids/rng.hpp"
#include "test_helpers.hpp"

using namespace flowids;

TEST_CASE("sigmoid hits the frozen reference points") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(1.0) == doctest::Approx(0.7310585786300049).epsilon(1e-14));
  CHECK(sigmoid(0.5) == doctest::Approx(0.6224593312018546).epsilon(1e-14));
  CHECK(sigmoid(40.0) > 0.999999);
  CHECK(sigmoid(-40.0) < 0.000001);
  // Saturates smoothly, never leaves the open interval.
  CHECK(sigmoid(800.0) <= 1.0);
  CHECK(sigmoid(-800.0) >= 0.0);
}

TEST_CASE("sigmoid symmetry: g(h) + g(-h) == 1") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double h = rng.uniform(-30.0, 30.0);
    CHECK(sigmoid(h) + sigmoid(-h) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sigmoid steepness follows beta") {
  CHECK(sigmoid(1.0, 2.0) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))));
  CHECK(sigmoid(0.0, 5.0) == 0.5);
}

TEST_CASE("init_model builds the chained shapes") {
  const auto model = init_model({78, 11, 1}, 1);
  REQUIRE(model.weights.size() == 2);
  CHECK(model.weights[0].rows == 78);
  CHECK(model.weights[0].cols == 11);
  CHECK(model.weights[1].rows == 11);
  CHECK(model.weights[1].cols == 1);
  CHECK(model.biases[0].size() == 11);
  CHECK(model.biases[1].size() == 1);
  CHECK(model.beta == 1.0);
}

TEST_CASE("init_model draws every parameter inside [-1, 1]") {
  for (const std::uint64_t seed : {0ULL, 7ULL, 123456789ULL}) {
    auto model = init_model({10, 8, 1}, seed);
    testutil::visit_parameters(model, [](double& v) {
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
    });
  }
}

TEST_CASE("init_model is bitwise deterministic per seed") {
  auto a = init_model({5, 4, 1}, 42);
  auto b = init_model({5, 4, 1}, 42);
  auto c = init_model({5, 4, 1}, 43);
  CHECK(a.weights[0].data == b.weights[0].data);
  CHECK(a.weights[1].data == b.weights[1].data);
  CHECK(a.biases == b.biases);
  CHECK(a.weights[0].data != c.weights[0].data);
}

TEST_CASE("init_model rejects degenerate layer lists") {
  CHECK_THROWS_AS(init_model({}, 1), std::invalid_argument);
  CHECK_THROWS_AS(init_model({78}, 1), std::invalid_argument);
  CHECK_THROWS_AS(init_model({78, 0, 1}, 1), std::invalid_argument);
}

TEST_CASE("forward with all-zero parameters gives 0.5 everywhere") {
  MlpModel model;
  model.layer_sizes = {3, 4, 1};
  model.weights = {Matrix(3, 4), Matrix(4, 1)};
  model.biases = {std::vector<double>(4, 0.0), std::vector<double>(1, 0.0)};

  const double pattern[3] = {0.2, 0.9, 0.4};
  const auto result = forward(model, pattern);
  for (const auto a : result.activations[1]) CHECK(a == 0.5);
  CHECK(result.output == 0.5);
}

TEST_CASE("forward composes the two-step 1-1-1 chain") {
  MlpModel model;
  model.layer_sizes = {1, 1, 1};
  model.weights = {Matrix(1, 1), Matrix(1, 1)};
  model.weights[0](0, 0) = 1.0;
  model.weights[1](0, 0) = 1.0;
  model.biases = {std::vector<double>{0.0}, std::vector<double>{0.0}};

  const double pattern[1] = {0.0};
  const auto result = forward(model, pattern);
  CHECK(result.activations[1][0] == 0.5);
  CHECK(result.output == doctest::Approx(0.6224593312018546).epsilon(1e-14));
}

TEST_CASE("forward output stays strictly inside (0,1)") {
  Rng rng(9);
  auto model = init_model({6, 5, 1}, 9);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> pattern(6);
    for (auto& v : pattern) v = rng.uniform();
    const double out = forward(model, pattern).output;
    CHECK(out > 0.0);
    CHECK(out < 1.0);
  }
}

TEST_CASE("forward rejects a dimension mismatch") {
  const auto model = init_model({4, 3, 1}, 1);
  const std::vector<double> wrong(3, 0.0);
  CHECK_THROWS_AS(forward(model, wrong), std::invalid_argument);
}

TEST_CASE("backprop_update is a no-op at a zero residual") {
  auto model = init_model({3, 2, 1}, 5);
  const std::vector<double> pattern = {0.1, 0.8, 0.3};
  const double y = forward(model, pattern).output;

  auto before = model;
  const double target[1] = {y};
  const double loss = backprop_update(model, pattern, target, 0.1);
  CHECK(loss == 0.0);
  CHECK(model.weights[0].data == before.weights[0].data);
  CHECK(model.weights[1].data == before.weights[1].data);
  CHECK(model.biases == before.biases);
}

TEST_CASE("backprop gradients match central finite differences on a 5-4-1 net") {
  Rng rng(31);
  auto model = init_model({5, 4, 1}, 31);
  std::vector<double> pattern(5);
  for (auto& v : pattern) v = rng.uniform();
  const double target[1] = {1.0};
  const double worst = testutil::gradient_check_max_rel_err(model, pattern, target);
  CHECK(worst < 1e-5);
}

TEST_CASE("repeated updates on one pattern push the error toward zero") {
  auto model = init_model({4, 3, 1}, 17);
  const std::vector<double> pattern = {0.9, 0.1, 0.5, 0.7};
  std::vector<double> losses;
  for (int i = 0; i < 1000; ++i)
    losses.push_back(backprop_update(model, pattern, 1.0, 0.1));
  // Strict decrease over windows of 10, approaching zero.
  for (std::size_t i = 0; i + 10 < losses.size(); i += 10)
    CHECK(losses[i + 10] < losses[i]);
  CHECK(losses.back() < 0.01);
  CHECK(losses.back() < losses.front() / 10.0);
}

TEST_CASE("train visits every pattern exactly once per epoch") {
  // The epoch order is a permutation drawn from Rng; verify that contract
  // on the generator, then check the trace length from train itself.
  Rng rng(8);
  for (int round = 0; round < 5; ++round) {
    const auto perm = rng.permutation(37);
    std::set<std::size_t> seen(perm.begin(), perm.end());
    CHECK(seen.size() == 37);
    CHECK(*seen.rbegin() == 36);
  }

  FeatureMatrix x;
  LabelVector y;
  testutil::xor_dataset(x, y);
  auto model = init_model({2, 4, 1}, 1);
  TrainConfig config;
  config.epochs = 25;
  const auto trace = train(model, x, y, config);
  CHECK(trace.epoch_mse.size() == 25);
  for (const auto e : trace.epoch_mse) {
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
  }
}

TEST_CASE("training is bitwise deterministic") {
  FeatureMatrix x(30, 3);
  LabelVector y;
  Rng rng(2);
  for (auto& v : x.values) v = rng.uniform();
  for (std::size_t i = 0; i < 30; ++i) y.values.push_back(rng.below(2));

  TrainConfig config;
  config.epochs = 40;
  config.seed = 77;

  auto m1 = init_model({3, 5, 1}, 10);
  auto m2 = init_model({3, 5, 1}, 10);
  const auto t1 = train(m1, x, y, config);
  const auto t2 = train(m2, x, y, config);
  CHECK(t1.epoch_mse == t2.epoch_mse);
  CHECK(m1.weights[0].data == m2.weights[0].data);
  CHECK(m1.weights[1].data == m2.weights[1].data);
  CHECK(m1.biases == m2.biases);
}

TEST_CASE("train rejects empty data and bad configs") {
  auto model = init_model({2, 2, 1}, 1);
  FeatureMatrix x;
  x.n_features = 2;
  LabelVector y;
  TrainConfig config;
  config.epochs = 1;
  CHECK_THROWS_AS(train(model, x, y, config), std::invalid_argument);

  FeatureMatrix x2(4, 2);
  LabelVector y2;
  y2.values.assign(4, 0);
  TrainConfig bad;
  bad.epochs = 1;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(train(model, x2, y2, bad), std::invalid_argument);
}

TEST_CASE("XOR converges with online updates") {
  FeatureMatrix x;
  LabelVector y;
  testutil::xor_dataset(x, y);

  double best = 1.0;
  for (std::uint64_t seed = 1; seed <= 5 && best >= 0.01; ++seed) {
    auto model = init_model({2, 4, 1}, seed);
    TrainConfig config;
    config.learning_rate = 0.5;
    config.epochs = 20000;
    config.seed = seed;
    const auto trace = train(model, x, y, config);
    best = std::min(best, trace.epoch_mse.back());
  }
  CHECK(best < 0.01);
}

TEST_CASE("predict_probability agrees with forward and is repeatable") {
  const auto model = init_model({4, 3, 1}, 20);
  const std::vector<double> pattern = {0.3, 0.1, 0.9, 0.5};
  const double p = predict_probability(model, pattern);
  CHECK(p == forward(model, pattern).output);
  CHECK(p == predict_probability(model, pattern));
  CHECK(p > 0.0);
  CHECK(p < 1.0);
}

TEST_CASE("classify uses a strict threshold") {
  CHECK(classify(0.51) == 1);
  CHECK(classify(0.49) == 0);
  CHECK(classify(0.5) == 0);  // exactly at threshold stays benign
  CHECK(classify(0.85, 0.9) == 0);
  CHECK(classify(0.95, 0.9) == 1);
}

TEST_CASE("mean_squared_error follows the definition") {
  const std::vector<double> same = {1.0, 0.0, 1.0};
  CHECK(mean_squared_error(same, same) == 0.0);

  const std::vector<double> y1 = {1.0, 0.0};
  const std::vector<double> z1 = {0.0, 1.0};
  CHECK(mean_squared_error(y1, z1) == 1.0);

  const std::vector<double> y2 = {0.9, 0.2, 0.4};
  const std::vector<double> z2 = {1.0, 0.0, 0.0};
  CHECK(mean_squared_error(y2, z2) == doctest::Approx(0.07).epsilon(1e-12));

  const std::vector<double> shorter = {1.0};
  CHECK_THROWS_AS(mean_squared_error(y1, shorter), std::invalid_argument);
}

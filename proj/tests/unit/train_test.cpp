#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fluxon/core/error.hpp"
#include "fluxon/snn/simulator.hpp"
#include "fluxon/train/ga.hpp"
#include "fluxon/train/iris.hpp"
#include "fluxon/train/mlp.hpp"
#include "fluxon/train/quantizer.hpp"
#include "test_support.hpp"

using namespace fluxon;
using namespace fluxon::train;

namespace {

std::vector<Sample> iris() { return load_iris_file((test::data_dir() / "iris.csv").string()); }

std::vector<int> count_labels(const std::vector<Sample>& s) {
  std::vector<int> c(kIrisClasses, 0);
  for (const auto& x : s) ++c[static_cast<std::size_t>(x.label)];
  return c;
}

std::vector<int> labels_of(const std::vector<Sample>& s) {
  std::vector<int> out;
  for (const auto& x : s) out.push_back(x.label);
  return out;
}

}  // namespace

TEST_CASE("iris loading") {
  auto all = iris();
  REQUIRE(all.size() == 150);
  CHECK(count_labels(all) == std::vector<int>{50, 50, 50});
  CHECK(all.front().features == std::vector<double>{5.1, 3.5, 1.4, 0.2});
  CHECK(iris_class_name(2) == "Iris-virginica");

  CHECK(load_iris("").empty());
  CHECK(load_iris("\n5.0,3.0,1.0,0.5,Iris-setosa\n\n").size() == 1);
  CHECK_THROWS_WITH_AS(load_iris("5.0,3.0,1.0,0.5,Iris-setosa\n5.0,3.0,x,0.5,Iris-setosa\n"),
                       doctest::Contains("line 2"), InputError);
  CHECK_THROWS_AS(load_iris("5.0,3.0,1.0,Iris-setosa\n"), InputError);
  CHECK_THROWS_AS(load_iris("5.0,3.0,1.0,0.5,Iris-rosea\n"), InputError);
  CHECK_THROWS_WITH_AS(load_iris_file("/nonexistent/iris.csv"), doctest::Contains("dataset not found"),
                       InputError);
}

TEST_CASE("quantile matches linear interpolation") {
  std::vector<double> v{9, 1, 8, 2, 7, 3, 6, 4, 5};
  // numpy.quantile(range(1, 10), [1/3, 2/3])
  CHECK(quantile(v, 1.0 / 3.0) == doctest::Approx(3.6666666666666665));
  CHECK(quantile(v, 2.0 / 3.0) == doctest::Approx(6.333333333333333));
  CHECK(quantile(v, 0.0) == 1.0);
  CHECK(quantile(v, 1.0) == 9.0);
  CHECK(quantile({4.0}, 0.5) == 4.0);
}

TEST_CASE("tertile quantizer") {
  std::vector<Sample> train;
  for (int v = 1; v <= 9; ++v) train.push_back({{static_cast<double>(v), 2.0, 0, 0}, 0});
  auto q = fit_quantizer(train);
  CHECK(q.cuts[0][0] == doctest::Approx(3.6666666666666665));
  CHECK(q.level(0, 2.0) == 0);
  CHECK(q.level(0, 5.0) == 1);
  CHECK(q.level(0, 8.0) == 2);
  CHECK(q.level(0, q.cuts[0][0]) == 0);
  CHECK(q.level(0, q.cuts[0][1]) == 1);
  // constant feature collapses to level 0
  CHECK(q.level(1, 2.0) == 0);
  CHECK(q.apply(std::vector<double>{1.0, 2.0, 0.0, 0.0}) == std::vector<int>{0, 0, 0, 0});

  auto back = quantizer_from_json(to_json(q));
  CHECK(back.cuts == q.cuts);
}

TEST_CASE("iris quantization balances levels on training data") {
  auto split = split_dataset(iris(), 0.8, 0);
  auto q = fit_quantizer(split.train);
  auto xs = q.apply(split.train);
  for (std::size_t f = 0; f < kIrisFeatures; ++f) {
    std::vector<int> c(3, 0);
    for (const auto& x : xs) ++c[static_cast<std::size_t>(x[f])];
    // ties in the data keep this loose
    for (int n : c) CHECK(n >= 20);
  }
}

TEST_CASE("stratified and plain splits") {
  auto all = iris();
  auto s = split_dataset(all, 0.8, 3);
  CHECK(s.train.size() == 120);
  CHECK(s.test.size() == 30);
  CHECK(count_labels(s.train) == std::vector<int>{40, 40, 40});
  CHECK(count_labels(s.test) == std::vector<int>{10, 10, 10});

  auto half = split_dataset(all, 0.5, 3, false);
  CHECK(half.train.size() == 75);
  CHECK(half.test.size() == 75);

  auto again = split_dataset(all, 0.8, 3);
  CHECK(labels_of(again.train) == labels_of(s.train));
  for (std::size_t i = 0; i < s.train.size(); ++i) CHECK(again.train[i].features == s.train[i].features);
  auto other = split_dataset(all, 0.8, 4);
  bool differs = false;
  for (std::size_t i = 0; i < s.test.size(); ++i) differs |= other.test[i].features != s.test[i].features;
  CHECK(differs);

  CHECK_THROWS_AS(split_dataset(all, 1.0, 0), InputError);
  CHECK_THROWS_AS(split_dataset(all, 0.001, 0), InputError);
}

TEST_CASE("backprop gradient agrees with finite differences") {
  RealMlp mlp({4, 6, 3}, 5);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 10);
  Eigen::MatrixXd y = one_hot({0, 1, 2, 0, 1, 2, 0, 1, 2, 0}, 3);
  CHECK(gradient_relative_error(mlp, x, y) < 1e-6);

  RealMlp deep({3, 4, 4, 2}, 9);
  Eigen::MatrixXd x2 = Eigen::MatrixXd::Random(3, 6);
  Eigen::MatrixXd y2 = one_hot({0, 1, 1, 0, 1, 0}, 2);
  CHECK(gradient_relative_error(deep, x2, y2) < 1e-6);
}

TEST_CASE("xor is learned by a 2-2-1 network") {
  Eigen::MatrixXd x(2, 4);
  x << 0, 0, 1, 1, 0, 1, 0, 1;
  Eigen::MatrixXd y(1, 4);
  y << 0, 1, 1, 0;
  auto r = train_mlp(x, y, {2, 2, 1}, {5000, 0.5, 1});
  REQUIRE(r.loss_history.size() == 5001);
  CHECK(r.loss_history.back() < r.loss_history.front());
  Eigen::MatrixXd out = r.mlp.forward(x);
  for (int j = 0; j < 4; ++j) CHECK((out(0, j) > 0.5) == (y(0, j) > 0.5));
}

TEST_CASE("zero epochs returns the initial network") {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 5);
  Eigen::MatrixXd y = one_hot({0, 1, 2, 0, 1}, 3);
  auto r = train_mlp(x, y, {4, 3, 3}, {0, 0.5, 12});
  CHECK(r.loss_history.size() == 1);
  CHECK(r.mlp.parameters() == RealMlp({4, 3, 3}, 12).parameters());
  CHECK_THROWS_AS(RealMlp({4}, 1), InputError);
}

TEST_CASE("mlp json round trip") {
  RealMlp mlp({4, 5, 3}, 2);
  auto back = RealMlp::from_json(mlp.to_json());
  CHECK(back.layer_sizes() == mlp.layer_sizes());
  CHECK(back.parameters() == mlp.parameters());
  CHECK_THROWS_AS(RealMlp::from_json(nlohmann::json::parse(R"({"layer_sizes":[2,1]})")), InputError);
}

TEST_CASE("complementing hidden units keeps the function") {
  RealMlp mlp({4, 5, 4, 3}, 3);
  Eigen::VectorXd p = mlp.parameters();
  for (Eigen::Index i = mlp.n_parameters() - 12; i < p.size(); ++i) p[i] = 0.3 * ((i % 5) - 2);
  mlp.set_parameters(p);
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 8);
  std::vector<bool> flags{true, false, true, true, false, false, true, false, true, false, false, false};
  auto c = complement_units(mlp, flags);
  CHECK((c.forward(x) - mlp.forward(x)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(c.weights(0).row(0) == -mlp.weights(0).row(0));

  auto pos = complement_positive_bias_units(mlp);
  CHECK((pos.forward(x) - mlp.forward(x)).cwiseAbs().maxCoeff() < 1e-12);
  for (std::size_t l = 0; l + 1 < pos.n_layers(); ++l) CHECK(pos.biases(l).maxCoeff() <= 0.0);
  CHECK(complement_units(mlp, positive_bias_flags(mlp)).parameters() == pos.parameters());

  std::vector<bool> output(12, false);
  output[11] = true;
  CHECK_THROWS_AS(complement_units(mlp, output), InputError);
  CHECK_THROWS_AS(complement_units(mlp, {true}), InputError);
}

TEST_CASE("decode rounds scaled weights and clamps them") {
  RealMlp mlp({2, 2, 2}, 1);
  Eigen::MatrixXd w0(2, 2), w1(2, 2);
  w0 << 0.4, -1.6, 2.7, 0.0;
  w1 << 1.0, -1.0, 0.2, 3.0;
  mlp.set_layer(0, w0, Eigen::VectorXd::Constant(2, -1.0));
  mlp.set_layer(1, w1, Eigen::VectorXd::Zero(2));
  GaConfig cfg;
  Chromosome c{{1.0, 2.0, 1.0, 1.0}, {0, 1, 2, 0}, {}};
  auto spec = decode(mlp, c, cfg);
  CHECK(spec.layers[0].weights == std::vector<std::vector<int>>{{0, -2}, {2, 0}});
  CHECK(spec.layers[0].thresholds == std::vector<int>{1, 2});
  CHECK(spec.layers[1].weights == std::vector<std::vector<int>>{{1, -1}, {0, 2}});
  CHECK(spec.layers[1].thresholds == std::vector<int>{5, 1});
  CHECK(spec.layers[0].synapse == behavioral::SynapseKind::SM4);
  CHECK(spec.layers[1].synapse == behavioral::SynapseKind::SM2);
}

TEST_CASE("fitness ordering") {
  CHECK(Fitness{0.9, 10, 20}.better_than({0.8, 1, 1}));
  CHECK(Fitness{0.9, 9, 20}.better_than({0.9, 10, 1}));
  CHECK(Fitness{0.9, 9, 19}.better_than({0.9, 9, 20}));
  CHECK_FALSE(Fitness{0.9, 9, 20}.better_than({0.9, 9, 20}));
}

TEST_CASE("genetic discretization of an iris network") {
  auto split = split_dataset(iris(), 0.8, 0);
  auto q = fit_quantizer(split.train);
  auto xs = q.apply(split.train);
  auto labels = labels_of(split.train);
  auto trained = train_mlp(to_matrix(xs), one_hot(labels, 3), {4, 6, 3}, {1500, 0.5, 1}).mlp;

  GaConfig cfg;
  cfg.population = 30;
  cfg.generations = 15;

  // the identity individual, built here by hand
  auto flags = positive_bias_flags(trained);
  auto comp = complement_units(trained, flags);
  Chromosome identity;
  for (std::size_t l = 0; l < comp.n_layers(); ++l) {
    for (Eigen::Index i = 0; i < comp.biases(l).size(); ++i) {
      identity.scales.push_back(1.0);
      double target = -comp.biases(l)[i];
      std::size_t best = 0;
      for (std::size_t k = 1; k < cfg.threshold_set.size(); ++k) {
        if (std::abs(cfg.threshold_set[k] - target) < std::abs(cfg.threshold_set[best] - target)) best = k;
      }
      identity.threshold_index.push_back(static_cast<int>(best));
    }
  }
  identity.complement = flags;
  auto identity_acc = snn::score_discrete(decode(trained, identity, cfg), xs, labels).accuracy();

  auto r = ga_discretize(trained, xs, labels, cfg);
  REQUIRE(r.trace.size() == 16);
  CHECK(r.trace.front().best_fitness >= identity_acc);
  for (std::size_t g = 1; g < r.trace.size(); ++g) CHECK(r.trace[g].best_fitness >= r.trace[g - 1].best_fitness);
  CHECK(r.fitness.accuracy == doctest::Approx(r.trace.back().best_fitness));
  CHECK(snn::score_discrete(r.spec, xs, labels).accuracy() == doctest::Approx(r.fitness.accuracy));
  for (const auto& layer : r.spec.layers) {
    for (const auto& row : layer.weights) {
      for (int w : row) CHECK(std::abs(w) <= 2);
    }
  }

  cfg.generations = 0;
  auto zero = ga_discretize(trained, xs, labels, cfg);
  CHECK(zero.trace.size() == 1);
  CHECK_NOTHROW(zero.spec.validate());

  auto again = ga_discretize(trained, xs, labels, cfg);
  CHECK(snn::format_network(again.spec) == snn::format_network(zero.spec));

  cfg.population = 1;
  CHECK_THROWS_AS(ga_discretize(trained, xs, labels, cfg), InputError);
}

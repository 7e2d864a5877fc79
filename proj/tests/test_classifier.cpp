#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gradient_check.hpp"
#include "screening/classifier.hpp"
#include "screening/errors.hpp"

using namespace screening;

namespace {

using Net = Mlp<double>;

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

struct Toy {
  Eigen::MatrixXd x;
  std::vector<Label> y;
};

// Two well separated blobs in the plane.
Toy separable(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 0.5);
  Toy toy{Eigen::MatrixXd(100, 2), {}};
  for (int i = 0; i < 100; ++i) {
    const bool lie = i % 2 == 1;
    toy.x(i, 0) = (lie ? 3.0 : -3.0) + n(rng);
    toy.x(i, 1) = (lie ? 1.0 : -1.0) + n(rng);
    toy.y.push_back(lie ? Label::Deception : Label::Truth);
  }
  return toy;
}

double accuracy(const ClassifierModel& m, const Toy& toy) {
  const Eigen::VectorXd d = m.predict(toy.x);
  int correct = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    correct += (d[i] >= 0.5) == (toy.y[static_cast<std::size_t>(i)] == Label::Deception);
  }
  return 100.0 * correct / static_cast<double>(d.size());
}

}  // namespace

TEST_CASE("stable activations") {
  CHECK(detail::sigmoid(0.0) == 0.5);
  CHECK(detail::sigmoid(800.0) == 1.0);
  CHECK(detail::sigmoid(-800.0) == 0.0);
  CHECK(detail::softplus(800.0) == 800.0);
  CHECK(detail::softplus(-800.0) == doctest::Approx(0.0));
  CHECK(detail::softplus(0.0) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("analytic gradients match central differences on random 38-8-1 networks") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    Engine engine(rng());
    Net net(38, 8, engine);
    // Non-zero biases so every parameter block is exercised.
    Eigen::VectorXd theta = net.parameters();
    theta += 0.1 * random_matrix(rng, theta.size(), 1);
    net.set_parameters(theta);

    const Eigen::MatrixXd z = random_matrix(rng, 25, 38);
    Eigen::VectorXd t(25);
    for (Eigen::Index i = 0; i < 25; ++i) t[i] = static_cast<double>(rng() % 2);
    CAPTURE(trial);
    CHECK(gradcheck::worst_relative_error(net, z, t, 0.0) < 1e-5);
    CHECK(gradcheck::worst_relative_error(net, z, t, 0.01) < 1e-5);
  }
}

TEST_CASE("outputs stay in [0,1] for extreme inputs (property)") {
  std::mt19937_64 rng(5);
  Engine engine(1);
  Net net(4, 3, engine);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd x = 1e6 * random_matrix(rng, 10, 4);
    const Eigen::VectorXd d = net.predict(x);
    CHECK(d.allFinite());
    CHECK(d.minCoeff() >= 0.0);
    CHECK(d.maxCoeff() <= 1.0);
  }
}

TEST_CASE("separable toy set is learned") {
  const auto toy = separable(9);
  const auto model = train_classifier(toy.x, toy.y, Hyperparams{}, 1);
  CHECK(accuracy(model, toy) >= 99.0);
  CHECK(model.final_loss <= model.initial_loss);
}

TEST_CASE("zero epochs leaves the initial network") {
  const auto toy = separable(10);
  Hyperparams hp;
  hp.epochs = 0;
  const auto model = train_classifier(toy.x, toy.y, hp, 3);
  CHECK(model.final_loss == model.initial_loss);
  // Balanced classes and an untrained network: loss stays near log 2.
  CHECK(model.initial_loss == doctest::Approx(std::log(2.0)).epsilon(0.3));

  Engine engine = make_engine(3, 0);
  const Net fresh(2, hp.hidden_width, engine);
  CHECK(model.network.parameters() == fresh.parameters());
}

TEST_CASE("training is deterministic given the seed") {
  const auto toy = separable(11);
  Hyperparams hp;
  hp.epochs = 50;
  const auto a = train_classifier(toy.x, toy.y, hp, 42);
  const auto b = train_classifier(toy.x, toy.y, hp, 42);
  const auto c = train_classifier(toy.x, toy.y, hp, 43);
  CHECK(a.network.parameters() == b.network.parameters());
  CHECK_FALSE(a.network.parameters() == c.network.parameters());
}

TEST_CASE("final loss does not exceed initial loss across seeds (property)") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd x = random_matrix(rng, 60, 5);
    std::vector<Label> y;
    for (int i = 0; i < 60; ++i) y.push_back(i % 2 ? Label::Deception : Label::Truth);
    Hyperparams hp;
    hp.epochs = 100;
    const auto m = train_classifier(x, y, hp, rng());
    CHECK(m.final_loss <= m.initial_loss);
  }
}

TEST_CASE("constant columns are tolerated") {
  auto toy = separable(12);
  Eigen::MatrixXd x(100, 3);
  x << toy.x, Eigen::VectorXd::Ones(100);
  const auto model = train_classifier(x, toy.y, Hyperparams{}, 1);
  CHECK(model.network.input_scale()[2] == 1.0);
  CHECK(model.predict(x).allFinite());
}

TEST_CASE("degenerate training inputs") {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Zero(4, 2);
  const std::vector<Label> truth(4, Label::Truth);
  CHECK_THROWS_AS(train_classifier(x, truth, Hyperparams{}, 0), DegenerateTraining);
  const std::vector<Label> three(3, Label::Deception);
  CHECK_THROWS_AS(train_classifier(x, three, Hyperparams{}, 0), InvalidArgument);
  Hyperparams hp;
  hp.momentum = 1.0;
  const std::vector<Label> mixed{Label::Truth, Label::Deception, Label::Truth, Label::Deception};
  CHECK_THROWS_AS(train_classifier(x, mixed, hp, 0), InvalidArgument);
}

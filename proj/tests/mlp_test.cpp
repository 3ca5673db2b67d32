#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"

#include "hostility/errors.hpp"
#include "hostility/mlp.hpp"
#include "hostility/rng.hpp"
#include "testutil.hpp"

using namespace hostility;
using doctest::Approx;

namespace {

ClassifierInput features_only(const std::vector<double>& x) {
  ClassifierInput in;
  in.features = &x;
  return in;
}

MlpModel random_model(std::size_t in_dim, std::size_t hidden, Rng& rng) {
  MlpModel m;
  m.in_dim = in_dim;
  m.hidden = hidden;
  m.W1.resize(hidden * in_dim);
  m.b1.resize(hidden);
  m.W2.resize(2 * hidden);
  m.b2.resize(2);
  for (double& w : m.W1) w = rng.uniform(-0.8, 0.8);
  for (double& w : m.b1) w = rng.uniform(-0.3, 0.3);
  for (double& w : m.W2) w = rng.uniform(-0.8, 0.8);
  for (double& w : m.b2) w = rng.uniform(-0.3, 0.3);
  return m;
}

// Training accuracy against {0,1} labels.
double accuracy(const MlpModel& m, const std::vector<std::vector<double>>& X,
                const std::vector<int>& y) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if ((m.raw_score(X[i]) >= 0.0) == (y[i] == 1)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(X.size());
}

// Two well-separated gaussian clouds.
void make_blobs(std::size_t n, std::uint64_t seed, std::vector<std::vector<double>>& X,
                std::vector<int>& y) {
  Rng rng(seed);
  X.clear();
  y.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i % 2;
    const double cx = label ? 2.0 : -2.0;
    const double cy = label ? 1.5 : -1.5;
    X.push_back({cx + rng.gaussian() * 0.5, cy + rng.gaussian() * 0.5});
    y.push_back(label);
  }
}

}  // namespace

TEST_CASE("equal logits mean an even softmax") {
  Rng rng(1);
  MlpModel m = random_model(3, 4, rng);
  m.W2.assign(2 * m.hidden, 0.0);  // both output rows identical
  m.b2 = {0.7, 0.7};
  const std::vector<double> x{0.3, -0.1, 0.5};
  const std::array<double, 2> z = m.logits(x);
  CHECK(z[0] == Approx(z[1]));
  CHECK(m.raw_score(x) == Approx(0.0));
  CHECK(m.prob(features_only(x)) == Approx(0.5));
}

TEST_CASE("analytic gradients match central finite differences") {
  Rng rng(42);
  const double eps = 1e-5;
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    MlpModel m = random_model(3, 5, rng);
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    for (int i = 0; i < 5; ++i) {
      X.push_back({rng.gaussian(), rng.gaussian(), rng.gaussian()});
      y.push_back(rng.uniform() < 0.5 ? 0 : 1);
    }
    MlpGradients grads;
    mlp_loss_and_grad(m, X, y, grads);

    auto check_param = [&](std::vector<double>& param, const std::vector<double>& grad) {
      // probe a handful of coordinates per tensor
      for (std::size_t k = 0; k < param.size(); k += std::max<std::size_t>(1, param.size() / 4)) {
        const double saved = param[k];
        param[k] = saved + eps;
        const double up = mlp_batch_loss(m, X, y);
        param[k] = saved - eps;
        const double down = mlp_batch_loss(m, X, y);
        param[k] = saved;
        const double numeric = (up - down) / (2.0 * eps);
        const double scale = std::max({1.0, std::abs(numeric), std::abs(grad[k])});
        worst = std::max(worst, std::abs(numeric - grad[k]) / scale);
      }
    };
    check_param(m.W1, grads.W1);
    check_param(m.b1, grads.b1);
    check_param(m.W2, grads.W2);
    check_param(m.b2, grads.b2);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("separable blobs are learned") {
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  make_blobs(200, 7, X, y);

  MlpConfig cfg;  // defaults: hidden 64, 10 epochs, lr 1e-3, batch 4
  const MlpModel m = train_mlp(X, y, cfg, 42);
  CHECK(accuracy(m, X, y) >= 0.95);

  SUBCASE("loss drops over the first epoch") {
    MlpConfig one;
    one.epochs = 1;
    MlpConfig zero;
    zero.epochs = 0;
    const MlpModel before = train_mlp(X, y, zero, 42);
    const MlpModel after = train_mlp(X, y, one, 42);
    CHECK(mlp_batch_loss(after, X, y) < mlp_batch_loss(before, X, y));
  }
}

TEST_CASE("training is reproducible") {
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  make_blobs(60, 11, X, y);
  MlpConfig cfg;
  cfg.epochs = 3;
  const MlpModel a = train_mlp(X, y, cfg, 1234);
  const MlpModel b = train_mlp(X, y, cfg, 1234);
  CHECK(a.W1 == b.W1);
  CHECK(a.b1 == b.b1);
  CHECK(a.W2 == b.W2);
  CHECK(a.b2 == b.b2);

  const MlpModel c = train_mlp(X, y, cfg, 1235);
  CHECK(a.W1 != c.W1);  // seed actually reaches the init
}

TEST_CASE("probability and prediction track the score") {
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  make_blobs(80, 13, X, y);
  MlpConfig cfg;
  cfg.epochs = 5;
  const MlpModel m = train_mlp(X, y, cfg, 9);
  for (const auto& x : X) {
    const ClassifierInput in = features_only(x);
    const double s = m.score(in);
    CHECK(m.prob(in) == Approx(logistic(s)));
    CHECK(m.predict(in) == (s >= 0.0));
  }
}

TEST_CASE("bad training inputs") {
  MlpConfig cfg;
  SUBCASE("non-finite features") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(train_mlp({{inf}, {0.0}}, {0, 1}, cfg, 1), TrainError);
  }
  SUBCASE("label out of range") {
    CHECK_THROWS_AS(train_mlp({{0.0}, {1.0}}, {0, 2}, cfg, 1), TrainError);
  }
  SUBCASE("empty") { CHECK_THROWS_AS(train_mlp({}, {}, cfg, 1), TrainError); }
}

TEST_CASE("balanced sample weights shift the loss") {
  // one positive among three: weighted loss counts it 3x harder
  MlpConfig cfg;
  cfg.epochs = 0;
  const std::vector<std::vector<double>> X{{1.0}, {-1.0}, {-2.0}, {-3.0}};
  const std::vector<int> y{1, 0, 0, 0};
  const MlpModel m = train_mlp(X, y, cfg, 5);
  const double plain = mlp_batch_loss(m, X, y);
  const std::vector<double> w{2.0, 2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0};
  const double weighted = mlp_batch_loss(m, X, y, w);
  CHECK(plain > 0.0);
  CHECK(weighted != Approx(plain));
}

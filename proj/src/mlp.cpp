#include "hostility/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hostility/errors.hpp"
#include "hostility/rng.hpp"
#include "hostility/svm.hpp"  // balanced_weights

namespace hostility {

namespace {

std::vector<double> hidden_activations(const MlpModel& m, const std::vector<double>& x) {
  std::vector<double> a(m.hidden);
  for (std::size_t h = 0; h < m.hidden; ++h) {
    double z = m.b1[h];
    const double* w = &m.W1[h * m.in_dim];
    for (std::size_t k = 0; k < m.in_dim; ++k) z += w[k] * x[k];
    a[h] = z > 0.0 ? z : 0.0;
  }
  return a;
}

std::array<double, 2> output_logits(const MlpModel& m, const std::vector<double>& a) {
  std::array<double, 2> z = {m.b2[0], m.b2[1]};
  for (std::size_t c = 0; c < 2; ++c) {
    const double* w = &m.W2[c * m.hidden];
    for (std::size_t h = 0; h < m.hidden; ++h) z[c] += w[h] * a[h];
  }
  return z;
}

std::array<double, 2> softmax2(const std::array<double, 2>& z) {
  const double mx = std::max(z[0], z[1]);
  const double e0 = std::exp(z[0] - mx), e1 = std::exp(z[1] - mx);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

double log_sum_exp2(const std::array<double, 2>& z) {
  const double mx = std::max(z[0], z[1]);
  return mx + std::log(std::exp(z[0] - mx) + std::exp(z[1] - mx));
}

}  // namespace

std::array<double, 2> MlpModel::logits(const std::vector<double>& x) const {
  return output_logits(*this, hidden_activations(*this, x));
}

double MlpModel::raw_score(const std::vector<double>& x) const {
  const auto z = logits(x);
  return z[1] - z[0];
}

double MlpModel::score(const ClassifierInput& in) const {
  if (!in.features) throw ConfigError("mlp backend needs assembled features");
  if (in.features->size() != in_dim) {
    throw DataError("feature dimension " + std::to_string(in.features->size()) +
                    " != model dimension " + std::to_string(in_dim));
  }
  return raw_score(*in.features);
}

double mlp_batch_loss(const MlpModel& m, const std::vector<std::vector<double>>& X,
                      const std::vector<int>& y, const std::vector<double>& sample_weights) {
  double loss = 0.0, wsum = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double w = sample_weights.empty() ? 1.0 : sample_weights[i];
    const auto z = m.logits(X[i]);
    loss += w * (log_sum_exp2(z) - z[y[i] ? 1 : 0]);
    wsum += w;
  }
  return wsum > 0.0 ? loss / wsum : 0.0;
}

double mlp_loss_and_grad(const MlpModel& m, const std::vector<std::vector<double>>& X,
                         const std::vector<int>& y, MlpGradients& out,
                         const std::vector<double>& sample_weights) {
  out.W1.assign(m.W1.size(), 0.0);
  out.b1.assign(m.b1.size(), 0.0);
  out.W2.assign(m.W2.size(), 0.0);
  out.b2.assign(m.b2.size(), 0.0);
  double wsum = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    wsum += sample_weights.empty() ? 1.0 : sample_weights[i];
  }
  if (wsum <= 0.0) return 0.0;
  double loss = 0.0;
  std::vector<double> dz1(m.hidden);
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double w = (sample_weights.empty() ? 1.0 : sample_weights[i]) / wsum;
    const std::vector<double>& x = X[i];
    const std::vector<double> a = hidden_activations(m, x);
    const auto z = output_logits(m, a);
    const auto p = softmax2(z);
    loss += w * (log_sum_exp2(z) - z[y[i] ? 1 : 0]);
    std::array<double, 2> dz2 = {p[0], p[1]};
    dz2[y[i] ? 1 : 0] -= 1.0;
    for (std::size_t c = 0; c < 2; ++c) {
      const double g = w * dz2[c];
      out.b2[c] += g;
      double* gw = &out.W2[c * m.hidden];
      for (std::size_t h = 0; h < m.hidden; ++h) gw[h] += g * a[h];
    }
    for (std::size_t h = 0; h < m.hidden; ++h) {
      // ReLU gate: a[h] > 0 iff pre-activation was positive
      dz1[h] = a[h] > 0.0 ? w * (dz2[0] * m.W2[h] + dz2[1] * m.W2[m.hidden + h]) : 0.0;
    }
    for (std::size_t h = 0; h < m.hidden; ++h) {
      if (dz1[h] == 0.0) continue;
      out.b1[h] += dz1[h];
      double* gw = &out.W1[h * m.in_dim];
      for (std::size_t k = 0; k < m.in_dim; ++k) gw[k] += dz1[h] * x[k];
    }
  }
  return loss;
}

MlpModel train_mlp(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                   const MlpConfig& cfg, std::uint64_t seed) {
  const std::size_t n = X.size();
  if (n == 0 || y.size() != n) throw TrainError("mlp needs a non-empty labeled sample set");
  const std::size_t d = X[0].size();
  if (d == 0) throw TrainError("mlp needs at least one feature dimension");
  for (std::size_t i = 0; i < n; ++i) {
    if (X[i].size() != d) throw TrainError("ragged feature matrix at row " + std::to_string(i));
    if (y[i] != 0 && y[i] != 1) {
      throw TrainError("mlp labels must be 0 or 1, got " + std::to_string(y[i]) + " at row " +
                       std::to_string(i));
    }
    for (double v : X[i]) {
      if (!std::isfinite(v)) {
        throw TrainError("non-finite feature value at row " + std::to_string(i));
      }
    }
  }

  MlpModel m;
  m.in_dim = d;
  m.hidden = cfg.hidden;
  m.W1.resize(cfg.hidden * d);
  m.b1.assign(cfg.hidden, 0.0);
  m.W2.resize(2 * cfg.hidden);
  m.b2.assign(2, 0.0);
  Rng rng(seed);
  const double lim1 = std::sqrt(6.0 / static_cast<double>(d + cfg.hidden));
  for (double& w : m.W1) w = rng.uniform(-lim1, lim1);
  const double lim2 = std::sqrt(6.0 / static_cast<double>(cfg.hidden + 2));
  for (double& w : m.W2) w = rng.uniform(-lim2, lim2);

  std::vector<double> class_w = {1.0, 1.0};
  if (cfg.class_weight) {
    auto [w0, w1] = balanced_weights(y);
    class_w = {w0, w1};
  }

  MlpGradients g;
  MlpGradients vel;
  vel.W1.assign(m.W1.size(), 0.0);
  vel.b1.assign(m.b1.size(), 0.0);
  vel.W2.assign(m.W2.size(), 0.0);
  vel.b2.assign(m.b2.size(), 0.0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = std::max<std::size_t>(1, cfg.batch);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(n, start + batch);
      std::vector<std::vector<double>> bx;
      std::vector<int> by;
      std::vector<double> bw;
      bx.reserve(stop - start);
      for (std::size_t k = start; k < stop; ++k) {
        bx.push_back(X[order[k]]);
        by.push_back(y[order[k]] ? 1 : 0);
        if (cfg.class_weight) bw.push_back(class_w[y[order[k]] ? 1 : 0]);
      }
      const double loss = mlp_loss_and_grad(m, bx, by, g, bw);
      if (std::isnan(loss)) {
        throw TrainError("mlp training diverged: NaN loss at epoch " + std::to_string(epoch + 1));
      }
      auto apply = [&](std::vector<double>& p, std::vector<double>& v,
                       const std::vector<double>& grad) {
        for (std::size_t k = 0; k < p.size(); ++k) {
          v[k] = cfg.momentum * v[k] - cfg.lr * grad[k];
          p[k] += v[k];
        }
      };
      apply(m.W1, vel.W1, g.W1);
      apply(m.b1, vel.b1, g.b1);
      apply(m.W2, vel.W2, g.W2);
      apply(m.b2, vel.b2, g.b2);
    }
  }
  return m;
}

}  // namespace hostility

#include "hostility/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <unordered_map>

#include "hostility/errors.hpp"

namespace hostility {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double kernel_eval(SvmKernel kernel, double gamma, const std::vector<double>& a,
                   const std::vector<double>& b) {
  if (kernel == SvmKernel::linear) return dot(a, b);
  return std::exp(-gamma * sq_dist(a, b));
}

// Kernel rows on demand, FIFO-evicted. Rows are handed out shared so the two
// rows of the current working pair survive eviction.
class KernelCache {
 public:
  KernelCache(const std::vector<std::vector<double>>& X, SvmKernel kernel, double gamma)
      : X_(X), kernel_(kernel), gamma_(gamma) {
    const std::size_t n = X.size();
    const std::size_t budget = (64u << 20) / (sizeof(double) * std::max<std::size_t>(1, n));
    max_rows_ = std::clamp<std::size_t>(budget, 16, n);
  }

  std::shared_ptr<const std::vector<double>> row(std::size_t i) {
    auto it = rows_.find(i);
    if (it != rows_.end()) return it->second;
    auto r = std::make_shared<std::vector<double>>(X_.size());
    for (std::size_t t = 0; t < X_.size(); ++t) (*r)[t] = kernel_eval(kernel_, gamma_, X_[i], X_[t]);
    if (rows_.size() >= max_rows_) {
      rows_.erase(order_.front());
      order_.erase(order_.begin());
    }
    rows_.emplace(i, r);
    order_.push_back(i);
    return r;
  }

 private:
  const std::vector<std::vector<double>>& X_;
  SvmKernel kernel_;
  double gamma_;
  std::size_t max_rows_;
  std::unordered_map<std::size_t, std::shared_ptr<const std::vector<double>>> rows_;
  std::vector<std::size_t> order_;
};

}  // namespace

std::pair<double, double> balanced_weights(const std::vector<int>& y) {
  std::size_t n1 = 0;
  for (int v : y) n1 += v ? 1 : 0;
  const std::size_t n0 = y.size() - n1;
  if (n0 == 0 || n1 == 0) throw TrainError("balanced class weights need both classes present");
  const double n = static_cast<double>(y.size());
  return {n / (2.0 * static_cast<double>(n0)), n / (2.0 * static_cast<double>(n1))};
}

double gamma_scale(const std::vector<std::vector<double>>& X) {
  if (X.empty() || X[0].empty()) throw TrainError("gamma 'scale' needs a non-empty feature matrix");
  double sum = 0.0, sq = 0.0;
  std::size_t count = 0;
  for (const auto& row : X) {
    for (double v : row) {
      sum += v;
      sq += v * v;
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  const double var = sq / static_cast<double>(count) - mean * mean;
  if (!(var > 1e-24)) throw TrainError("zero feature variance: gamma 'scale' undefined");
  return 1.0 / (static_cast<double>(X[0].size()) * var);
}

double SvmModel::raw_score(const std::vector<double>& x) const {
  if (kernel == SvmKernel::linear) return dot(linear_w, x) + bias;
  double s = bias;
  for (std::size_t i = 0; i < support_vectors.size(); ++i) {
    s += dual_coef[i] * std::exp(-gamma * sq_dist(support_vectors[i], x));
  }
  return s;
}

double SvmModel::score(const ClassifierInput& in) const {
  if (!in.features) throw ConfigError("svm backend needs assembled features");
  const std::size_t dim = kernel == SvmKernel::linear
                              ? linear_w.size()
                              : (support_vectors.empty() ? in.features->size()
                                                         : support_vectors[0].size());
  if (in.features->size() != dim) {
    throw DataError("feature dimension " + std::to_string(in.features->size()) +
                    " != model dimension " + std::to_string(dim));
  }
  return raw_score(*in.features);
}

SvmModel train_svm(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                   const SvmConfig& cfg) {
  const std::size_t n = X.size();
  if (n < 2 || y.size() != n) throw TrainError("svm needs at least two samples with labels");
  const std::size_t d = X[0].size();
  for (std::size_t i = 0; i < n; ++i) {
    if (X[i].size() != d) throw TrainError("ragged feature matrix at row " + std::to_string(i));
    for (double v : X[i]) {
      if (!std::isfinite(v)) {
        throw TrainError("non-finite feature value at row " + std::to_string(i));
      }
    }
  }

  auto [w0, w1] = cfg.weighting == ClassWeighting::balanced ? balanced_weights(y)
                                                            : std::pair<double, double>{1.0, 1.0};
  if (cfg.weighting != ClassWeighting::balanced) {
    // balanced_weights already rejected single-class data; mirror that here
    const bool has0 = std::find(y.begin(), y.end(), 0) != y.end();
    const bool has1 = std::find_if(y.begin(), y.end(), [](int v) { return v != 0; }) != y.end();
    if (!has0 || !has1) throw TrainError("svm needs both classes present");
  }

  SvmModel model;
  model.kernel = cfg.kernel;
  model.C = cfg.C;
  model.weight_neg = w0;
  model.weight_pos = w1;
  model.gamma = cfg.kernel == SvmKernel::rbf ? (cfg.gamma ? *cfg.gamma : gamma_scale(X)) : 0.0;

  std::vector<double> s(n), box(n), alpha(n, 0.0), G(n, -1.0);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = y[i] ? 1.0 : -1.0;
    box[i] = cfg.C * (y[i] ? w1 : w0);
  }

  KernelCache cache(X, cfg.kernel, model.gamma);
  const double inf = std::numeric_limits<double>::infinity();
  auto objective = [&] {
    double obj = 0.0;
    for (std::size_t t = 0; t < n; ++t) obj += 0.5 * alpha[t] * (1.0 - G[t]);
    return obj;  // = 0.5*sum(alpha) - 0.5*sum(alpha*G)
  };

  model.objective_history.push_back(objective());
  const std::size_t iters_per_pass = n;
  const std::size_t max_iters = cfg.max_passes * iters_per_pass;
  bool converged = false;
  for (std::size_t it = 0; it < max_iters; ++it) {
    // maximal violating pair; smallest index wins ties
    double m = -inf, M = inf;
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -s[t] * G[t];
      const bool in_up = s[t] > 0 ? alpha[t] < box[t] : alpha[t] > 0.0;
      const bool in_low = s[t] > 0 ? alpha[t] > 0.0 : alpha[t] < box[t];
      if (in_up && v > m) {
        m = v;
        i = t;
      }
      if (in_low && v < M) {
        M = v;
        j = t;
      }
    }
    if (i >= n || j >= n || m - M <= cfg.tol) {
      converged = true;
      break;
    }
    const auto Ki = cache.row(i);
    const auto Kj = cache.row(j);
    double eta = (*Ki)[i] + (*Kj)[j] - 2.0 * (*Ki)[j];
    if (eta <= 0.0) eta = 1e-12;
    const double up_i = s[i] > 0 ? box[i] - alpha[i] : alpha[i];
    const double up_j = s[j] > 0 ? alpha[j] : box[j] - alpha[j];
    const double step = std::min((m - M) / eta, std::min(up_i, up_j));
    alpha[i] += s[i] * step;
    alpha[j] -= s[j] * step;
    for (std::size_t t = 0; t < n; ++t) G[t] += s[t] * step * ((*Ki)[t] - (*Kj)[t]);
    if ((it + 1) % iters_per_pass == 0) model.objective_history.push_back(objective());
  }
  model.converged = converged;
  model.objective_history.push_back(objective());

  // bias from free support vectors; fall back to the violating-pair midpoint
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 1e-12 && alpha[t] < box[t] - 1e-12) {
      free_sum += -s[t] * G[t];
      ++free_count;
    }
  }
  if (free_count > 0) {
    model.bias = free_sum / static_cast<double>(free_count);
  } else {
    double m = -inf, M = inf;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -s[t] * G[t];
      const bool in_up = s[t] > 0 ? alpha[t] < box[t] : alpha[t] > 0.0;
      const bool in_low = s[t] > 0 ? alpha[t] > 0.0 : alpha[t] < box[t];
      if (in_up) m = std::max(m, v);
      if (in_low) M = std::min(M, v);
    }
    if (m > -inf && M < inf) {
      model.bias = -(m + M) / 2.0;
    } else if (m > -inf) {
      model.bias = -m;
    } else if (M < inf) {
      model.bias = -M;
    }
  }

  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 1e-12) {
      model.support_vectors.push_back(X[t]);
      model.dual_coef.push_back(alpha[t] * s[t]);
    }
  }
  if (cfg.kernel == SvmKernel::linear) {
    model.linear_w.assign(d, 0.0);
    for (std::size_t v = 0; v < model.support_vectors.size(); ++v) {
      for (std::size_t k = 0; k < d; ++k) {
        model.linear_w[k] += model.dual_coef[v] * model.support_vectors[v][k];
      }
    }
  }
  return model;
}

}  // namespace hostility

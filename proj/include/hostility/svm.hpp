#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "hostility/classifier.hpp"

namespace hostility {

enum class SvmKernel { linear, rbf };

inline std::string_view to_string(SvmKernel k) { return k == SvmKernel::linear ? "linear" : "rbf"; }

inline std::optional<SvmKernel> parse_kernel(std::string_view s) {
  if (s == "linear") return SvmKernel::linear;
  if (s == "rbf") return SvmKernel::rbf;
  return std::nullopt;
}

enum class ClassWeighting { none, balanced };

inline std::string_view to_string(ClassWeighting w) {
  return w == ClassWeighting::balanced ? "balanced" : "none";
}

inline std::optional<ClassWeighting> parse_weighting(std::string_view s) {
  if (s == "balanced") return ClassWeighting::balanced;
  if (s == "none") return ClassWeighting::none;
  return std::nullopt;
}

struct SvmConfig {
  SvmKernel kernel = SvmKernel::rbf;
  double C = 1.0;
  std::optional<double> gamma;      // empty = "scale": 1 / (d * var(X))
  double tol = 1e-3;
  std::size_t max_passes = 200;     // one pass = n working-set updates
  ClassWeighting weighting = ClassWeighting::balanced;
};

// w_c = N / (2 * N_c) for c in {0, 1}, returned as (w0, w1).
// Throws TrainError when a class is absent.
std::pair<double, double> balanced_weights(const std::vector<int>& y);

// 1 / (d * var) with var pooled over every entry of X.
// Throws TrainError on zero variance.
double gamma_scale(const std::vector<std::vector<double>>& X);

struct SvmModel final : public BinaryClassifier {
  SvmKernel kernel = SvmKernel::rbf;
  double gamma = 0.0;               // rbf only
  double C = 1.0;
  double weight_pos = 1.0;          // effective per-class C multipliers
  double weight_neg = 1.0;
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> dual_coef;    // alpha_i * s_i per support vector
  double bias = 0.0;
  std::vector<double> linear_w;     // collapsed weights (linear kernel)
  bool converged = true;
  std::vector<double> objective_history;  // dual objective per pass

  double raw_score(const std::vector<double>& x) const;
  double score(const ClassifierInput& in) const override;
  std::string_view kind() const override { return "svm"; }
};

// Dual SMO with deterministic maximal-violating-pair selection (smallest
// index on ties). y in {0, 1}. Non-convergence within max_passes returns the
// best iterate with converged = false; degenerate single-class data and
// non-finite features throw TrainError.
SvmModel train_svm(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                   const SvmConfig& cfg);

}  // namespace hostility

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "hostility/classifier.hpp"

namespace hostility {

struct MlpConfig {
  std::size_t hidden = 64;
  std::size_t epochs = 10;
  double lr = 1e-3;
  std::size_t batch = 4;
  double momentum = 0.0;
  bool class_weight = false;  // balanced per-sample weights in the loss
};

// hidden ReLU layer + 2-way softmax output. score = z[1] - z[0], so
// logistic(score) IS the softmax positive-class probability and the
// base-class prob() needs no override.
struct MlpModel final : public BinaryClassifier {
  std::size_t in_dim = 0;
  std::size_t hidden = 0;
  std::vector<double> W1;  // hidden x in_dim, row-major
  std::vector<double> b1;  // hidden
  std::vector<double> W2;  // 2 x hidden, row-major
  std::vector<double> b2;  // 2

  std::array<double, 2> logits(const std::vector<double>& x) const;
  double raw_score(const std::vector<double>& x) const;
  double score(const ClassifierInput& in) const override;
  std::string_view kind() const override { return "mlp"; }
};

// Mini-batch SGD on softmax cross-entropy; Glorot-uniform init and per-epoch
// shuffling both driven by `seed`. Throws TrainError on NaN loss or
// non-finite features.
MlpModel train_mlp(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                   const MlpConfig& cfg, std::uint64_t seed);

struct MlpGradients {
  std::vector<double> W1, b1, W2, b2;
};

// Mean cross-entropy of the batch (optionally weighted); both exposed so the
// analytic gradients can be checked against central finite differences.
double mlp_batch_loss(const MlpModel& m, const std::vector<std::vector<double>>& X,
                      const std::vector<int>& y, const std::vector<double>& sample_weights = {});
double mlp_loss_and_grad(const MlpModel& m, const std::vector<std::vector<double>>& X,
                         const std::vector<int>& y, MlpGradients& out,
                         const std::vector<double>& sample_weights = {});

}  // namespace hostility

#pragma once

#include <cmath>
#include <string_view>
#include <vector>

#include "hostility/corpus.hpp"

namespace hostility {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// What a backend may consume: the post itself (id, raw text) and, when the
// caller assembled them, the feature vector. Backends pick what they need.
struct ClassifierInput {
  const Post* post = nullptr;
  const std::vector<double>* features = nullptr;
};

// One binary scorer. The threshold alignment predict = (prob >= 0.5) =
// (score >= 0) holds for every implementation: prob defaults to
// logistic(score), and the one backend that stores probabilities directly
// derives score as the logit.
class BinaryClassifier {
 public:
  virtual ~BinaryClassifier() = default;

  virtual double score(const ClassifierInput& in) const = 0;
  virtual double prob(const ClassifierInput& in) const { return logistic(score(in)); }
  bool predict(const ClassifierInput& in) const { return score(in) >= 0.0; }

  virtual std::string_view kind() const = 0;
};

}  // namespace hostility

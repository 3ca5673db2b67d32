#pragma once

#include <string>
#include <string_view>
#include <unordered_map>

#include "hostility/classifier.hpp"

namespace hostility {

// Probabilities produced outside this artifact (e.g. a fine-tuned
// transformer), keyed by post id. prob() returns the stored value untouched;
// score() is its logit, which keeps the predict/prob/score alignment exact.
struct ExternalScores final : public BinaryClassifier {
  std::string path;  // provenance, used in error messages
  std::unordered_map<std::string, double> probs;

  double prob_for(const std::string& id) const;
  double score(const ClassifierInput& in) const override;
  double prob(const ClassifierInput& in) const override;
  std::string_view kind() const override { return "external"; }
};

// TSV `post_id\tprobability`; values must lie in [0, 1], duplicate ids are an
// error.
ExternalScores load_external_scores(const std::string& path);

}  // namespace hostility

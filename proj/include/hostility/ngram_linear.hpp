#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hostility/classifier.hpp"

namespace hostility {

struct NgramConfig {
  std::size_t epochs = 30;
  double lr = 0.2;
  double l2 = 1e-5;
  std::size_t min_df = 1;
};

// Raw-text counts: word unigrams/bigrams (whitespace split) plus codepoint
// 2..4-grams over the full text, spaces included. Keys carry their kind:
// "w1:", "w2:", "c2:", "c3:", "c4:".
std::unordered_map<std::string, double> ngram_counts(std::string_view text);

// Logistic regression over tf-idf n-gram vectors; the tf-idf uses
// idf = ln((N+1)/(df+1)) + 1 and document vectors are L2-normalized.
struct NgramLinearModel final : public BinaryClassifier {
  std::vector<std::string> vocab;  // sorted keys
  std::vector<double> idf;
  std::vector<double> weights;
  double bias = 0.0;

  void rebuild_index();
  double score_text(std::string_view text) const;
  double score(const ClassifierInput& in) const override;
  std::string_view kind() const override { return "ngram"; }

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

// SGD with per-epoch seeded shuffling. Throws TrainError when the vocabulary
// comes out empty or the data is single-class.
NgramLinearModel train_ngram_linear(const std::vector<std::string>& texts,
                                    const std::vector<int>& y, const NgramConfig& cfg,
                                    std::uint64_t seed);

}  // namespace hostility

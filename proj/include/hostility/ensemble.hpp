#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hostility/classifier.hpp"
#include "hostility/corpus.hpp"
#include "hostility/corpus_io.hpp"
#include "hostility/external_scores.hpp"
#include "hostility/features.hpp"
#include "hostility/mlp.hpp"
#include "hostility/ngram_linear.hpp"
#include "hostility/preprocess.hpp"
#include "hostility/resources.hpp"
#include "hostility/svm.hpp"

namespace hostility {

enum class FallbackStrategy { hate_offensive, max_probability };

std::string_view to_string(FallbackStrategy s);
std::optional<FallbackStrategy> parse_fallback(std::string_view s);

enum class BackendKind { svm, mlp, ngram, external };

std::string_view to_string(BackendKind k);

struct BackendChoice {
  BackendKind kind = BackendKind::ngram;
  std::string external_path;  // external only

  // "svm" | "mlp" | "ngram" | "external:<path>"
  std::string spec_string() const;
  static BackendChoice parse(std::string_view s);  // throws ConfigError
};

struct EnsembleConfig {
  std::uint64_t seed = 42;
  FallbackStrategy fallback = FallbackStrategy::hate_offensive;
  BackendChoice level1;                  // hostility router
  std::array<BackendChoice, 4> level2;   // indexed by hostile label order
  FeatureThresholds features;
  SvmConfig svm;
  MlpConfig mlp;
  NgramConfig ngram;
  std::size_t jobs = 1;

  // The submitted system's shape: router/fake/offensive = n-gram linear,
  // hate = mlp, defamation = svm.
  static EnsembleConfig defaults();
};

// Everything a trained model needs at inference time. Owning; the model
// carries it so a loaded bundle is self-sufficient.
struct ModelResources {
  std::optional<EmbeddingTable> word_vectors;
  std::optional<SampleVectorTable> sample_vectors;
  // Source files. Vector tables are too big to embed, so bundles record the
  // path and reload at open time (dimension re-checked then).
  std::string word_vectors_path;
  std::string sample_vectors_path;
  std::optional<Lexicon> hate_lexicon;
  std::optional<Lexicon> swear_lexicon;
  Lexicon stopwords{"stopwords"};  // empty set = no stopword removal
  EmojiRanges emoji = EmojiRanges::defaults();

  FeatureResources feature_handles() const;
};

// Slot indices: 0 = level-1 router, 1 + hostile-label value = that label's
// level-2 classifier. Training seeds derive per slot, so slots train
// identically whether run sequentially or in parallel.
inline constexpr std::size_t kSlotCount = 5;

std::string_view slot_name(std::size_t slot);

struct TrainedSlot {
  BackendChoice backend;
  FeatureSpec spec;  // empty for backends that read raw text / ids
  std::unique_ptr<BinaryClassifier> clf;
};

struct EnsembleModel {
  EnsembleConfig config;
  ModelResources resources;
  TrainedSlot level1;
  std::array<TrainedSlot, 4> level2;

  const TrainedSlot& slot(std::size_t i) const { return i == 0 ? level1 : level2[i - 1]; }
  TrainedSlot& slot(std::size_t i) { return i == 0 ? level1 : level2[i - 1]; }
};

// Per-slot numbers for the run summary (timings stay out of the bundle).
struct TrainStats {
  std::array<double, kSlotCount> seconds{};
  std::array<std::size_t, kSlotCount> samples{};
  std::array<std::size_t, kSlotCount> positives{};
  std::array<std::size_t, kSlotCount> feature_dims{};
};

// Level 1 trains on every sample (hostile vs not); each level-2 classifier
// trains on the hostile subset only. Throws DataError on unlabeled posts,
// TrainError when the hostile subset is empty or a hostile dimension is
// degenerate inside it (the message names the label).
EnsembleModel train_ensemble(const Corpus& corpus, const EnsembleConfig& cfg, ModelResources res,
                             TrainStats* stats = nullptr,
                             std::vector<std::string>* warnings = nullptr);

// Only called when the level-2 union came out empty. probs indexed by
// hostile label order.
LabelSet fallback_resolve(const std::array<double, 4>& probs, FallbackStrategy strategy);

struct PredictDetail {
  LabelSet labels;
  bool routed_hostile = false;
  bool fallback_used = false;
  double level1_prob = 0.0;
  std::array<double, 4> level2_probs{};  // meaningful when routed_hostile
};

PredictDetail predict_detail(const EnsembleModel& m, const Post& post);
LabelSet predict(const EnsembleModel& m, const Post& post);

struct BatchResult {
  std::vector<Prediction> predictions;
  std::size_t fallback_count = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // (id, message)
};

// Per-post errors are collected, not fatal; the batch continues.
BatchResult predict_batch(const EnsembleModel& m, const Corpus& corpus);

// Label Powerset alternative: one-vs-rest n-gram linear scorer per label
// combination observed in training ({non_hostile} included), prediction =
// best-scoring combination, ties broken by canonical combo string.
struct LabelPowersetModel {
  EnsembleConfig config;
  std::vector<LabelSet> combos;            // sorted by canonical string
  std::vector<NgramLinearModel> scorers;   // parallel to combos
};

LabelPowersetModel train_label_powerset(const Corpus& corpus, const EnsembleConfig& cfg,
                                        std::vector<std::string>* warnings = nullptr);
LabelSet predict_lp(const LabelPowersetModel& m, const Post& post);
BatchResult predict_batch_lp(const LabelPowersetModel& m, const Corpus& corpus);

}  // namespace hostility

#pragma once

#include <cstdint>
#include <string>

#include "hostility/corpus_io.hpp"
#include "hostility/ensemble.hpp"
#include "hostility/metrics.hpp"
#include "hostility/model_store.hpp"

namespace hostility {

// One JSON file drives a whole run. Every key is optional and defaults to
// the submitted system's settings; unknown keys are rejected so typos fail
// loudly instead of silently using a default.
//
// Schema (all keys optional):
//   {
//     "seed": 42,
//     "strategy": "binary_relevance" | "label_powerset",
//     "fallback": "hate_offensive" | "max_prob",
//     "jobs": 1,            (runtime-only: not in the canonical serialization)
//     "paths": {
//       "train": "...", "val": "...", "test": "...",
//       "stopwords": "...", "word_vectors": "...", "sample_vectors": "...",
//       "hate_lexicon": "...", "swear_lexicon": "...", "emoji_ranges": "..."
//     },
//     "format": { "type": "tsv"|"csv",
//                 "id_column": "", "text_column": "", "labels_column": "" },
//     "backends": { "hostile": "ngram", "fake": "ngram", "hate": "mlp",
//                   "offensive": "ngram", "defamation": "svm" },
//     "features": { "hashtag_min_freq": 3, "mention_min_freq": 3,
//                   "emoji_min_freq": 3, "word_min_freq": 5,
//                   "max_tokens": 100, "standardize_embeddings": true },
//     "svm":   { "kernel": "rbf", "C": 1.0, "gamma": null, "tol": 1e-3,
//                "max_passes": 200, "weighting": "balanced" },
//     "mlp":   { "hidden": 64, "epochs": 10, "lr": 1e-3, "batch": 4,
//                "momentum": 0.0, "class_weight": false },
//     "ngram": { "epochs": 30, "lr": 0.2, "l2": 1e-5, "min_df": 1 },
//     "eval":  { "scope": "end_to_end" | "second_level" }
//   }
struct RunConfig {
  struct Paths {
    std::string train, val, test;
    std::string stopwords, word_vectors, sample_vectors;
    std::string hate_lexicon, swear_lexicon, emoji_ranges;
  };

  Paths paths;
  FileFormat format = FileFormat::tsv;
  ColumnMapping columns;
  Strategy strategy = Strategy::binary_relevance;
  EnsembleConfig ensemble = EnsembleConfig::defaults();  // seed/fallback/backends/knobs/jobs
  EvalScope scope = EvalScope::end_to_end;
};

// Throws ConfigError on malformed JSON, an unknown key, or a bad value.
RunConfig parse_run_config(const std::string& json_text, const std::string& context);
RunConfig load_run_config(const std::string& path);

// Canonical serialization: sorted keys, every field explicit. Byte-stable for
// a given config, so it doubles as the hash input and the bundle's
// "run_config" record.
std::string run_config_json(const RunConfig& cfg);

// FNV-1a over run_config_json, rendered as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

// Same digest over arbitrary text (summaries hash a bundle's stored config).
std::string fnv1a_hex(const std::string& text);

}  // namespace hostility

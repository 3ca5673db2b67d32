#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hostility {

// Word -> vector table in word2vec text format. Keys are normalized with
// preprocess normalize() at load time, so pipeline tokens match exactly.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vecs_.size(); }

  const std::vector<double>* find(const std::string& token) const {
    auto it = vecs_.find(token);
    return it == vecs_.end() ? nullptr : &it->second;
  }

  // Returns false if the token replaced an existing entry.
  bool insert(std::string token, std::vector<double> vec) {
    auto [it, fresh] = vecs_.insert_or_assign(std::move(token), std::move(vec));
    (void)it;
    return fresh;
  }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vecs_;
};

// Precomputed per-post vectors (sentence embeddings), keyed by post id.
class SampleVectorTable {
 public:
  SampleVectorTable() = default;
  explicit SampleVectorTable(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vecs_.size(); }

  const std::vector<double>* find(const std::string& id) const {
    auto it = vecs_.find(id);
    return it == vecs_.end() ? nullptr : &it->second;
  }

  bool insert(std::string id, std::vector<double> vec) {
    auto [it, fresh] = vecs_.insert_or_assign(std::move(id), std::move(vec));
    (void)it;
    return fresh;
  }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vecs_;
};

// Named set of normalized tokens (stopwords, swear words, hate words).
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  bool contains(const std::string& token) const { return tokens_.count(token) != 0; }
  void insert(std::string token) { tokens_.insert(std::move(token)); }

  // Deterministic (sorted) view, for serialization.
  std::vector<std::string> sorted_tokens() const;

 private:
  std::string name_;
  std::unordered_set<std::string> tokens_;
};

// Loaders. `warnings` collects non-fatal findings; when null they go to stderr.

// Text format: optional first line "count dim", then "token v1 ... vd" per
// line. A headerless file infers the dimension from its first row. A later
// duplicate token overwrites the earlier entry with a warning.
EmbeddingTable load_word_vectors(const std::string& path,
                                 std::vector<std::string>* warnings = nullptr);

// TSV: post_id \t "v1 v2 ... vd".
SampleVectorTable load_sample_vectors(const std::string& path,
                                      std::vector<std::string>* warnings = nullptr);

// One token per line, '#'-prefixed comment lines, empty lines skipped.
// Tokens are normalized. Throws DataError if the result is empty.
Lexicon load_lexicon(const std::string& path, const std::string& name);
Lexicon load_stopwords(const std::string& path);

}  // namespace hostility

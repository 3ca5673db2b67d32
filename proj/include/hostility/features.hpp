#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "hostility/label.hpp"
#include "hostility/preprocess.hpp"
#include "hostility/resources.hpp"

namespace hostility {

enum class VocabKind { hashtag, mention, emoji, word };

std::string_view to_string(VocabKind k);
std::optional<VocabKind> parse_vocab_kind(std::string_view s);

// Entities (or tokens) kept for one class, ordered by count descending then
// lexicographic, counted over the class-positive posts.
struct Vocab {
  Label cls = Label::non_hostile;
  VocabKind kind = VocabKind::word;
  std::size_t min_freq = 1;
  std::vector<std::string> entries;

  std::size_t size() const { return entries.size(); }
  void rebuild_index();
  bool contains(const std::string& entry) const { return index_.count(entry) != 0; }

  std::optional<std::size_t> find_entry(const std::string& entry) const {
    auto it = index_.find(entry);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
};

// Counts with multiplicity over posts whose labels contain `cls`; keeps
// entries with count >= min_freq. Unlabeled posts are skipped. A
// non_hostile vocabulary is legal but warned about.
Vocab build_vocab(const std::vector<PreparedPost>& posts, Label cls, VocabKind kind,
                  std::size_t min_freq, std::vector<std::string>* warnings = nullptr);

// Presence (0/1) per vocab entry.
std::vector<double> encode_onehot(const PreparedPost& post, const Vocab& vocab);

// Mean of the vectors of the first max_tokens tokens found in the table;
// zero vector when none are.
std::vector<double> pool_embeddings(const std::vector<std::string>& tokens,
                                    const EmbeddingTable& table, std::size_t max_tokens);

// (count, count / max(1, |tokens|)).
std::pair<double, double> lexicon_count(const std::vector<std::string>& tokens, const Lexicon& lex);

enum class EmbeddingProvider { word_vectors, sample_vectors };

std::string_view to_string(EmbeddingProvider p);
std::optional<EmbeddingProvider> parse_embedding_provider(std::string_view s);

struct EmbeddingBlock {
  EmbeddingProvider provider = EmbeddingProvider::word_vectors;
  std::size_t dim = 0;
  std::size_t max_tokens = 100;   // pooling cap (word_vectors only)
  bool standardize = false;
  std::vector<double> mean;       // training-set stats, filled by fit_standardizer
  std::vector<double> stdev;
};

struct OneHotBlock {
  Vocab vocab;
};

struct LexiconCountBlock {
  std::string lexicon;  // "hate" or "swear"
};

using FeatureBlock = std::variant<EmbeddingBlock, OneHotBlock, LexiconCountBlock>;

std::size_t block_dim(const FeatureBlock& b);

struct FeatureSpec {
  std::vector<FeatureBlock> blocks;

  std::size_t total_dim() const;
};

// Resource handles assemble() resolves block references against. Non-owning.
struct FeatureResources {
  const EmbeddingTable* word_vectors = nullptr;
  const SampleVectorTable* sample_vectors = nullptr;
  const Lexicon* hate_lexicon = nullptr;
  const Lexicon* swear_lexicon = nullptr;
};

// Concatenated block outputs in spec order. Throws DataError when a
// sample-vector block has no vector for the post id or a value is non-finite;
// ConfigError when a block references a resource that is not loaded.
std::vector<double> assemble(const PreparedPost& post, const FeatureSpec& spec,
                             const FeatureResources& res);

// Fills mean/stdev of every standardize-enabled embedding block from the raw
// (unstandardized) block outputs over `posts`. Zero variance maps to
// stdev 1 so standardization stays a no-op there.
void fit_standardizer(FeatureSpec& spec, const std::vector<PreparedPost>& posts,
                      const FeatureResources& res);

struct FeatureThresholds {
  std::size_t hashtag_min_freq = 3;
  std::size_t mention_min_freq = 3;
  std::size_t emoji_min_freq = 3;
  std::size_t word_min_freq = 5;
  std::size_t max_tokens = 100;
  bool standardize_embeddings = true;
};

// Per-class recipes. Defamation: word-vector pooling + hashtag/mention/emoji
// one-hots + swear counts. Every other hostile class follows the hate recipe:
// sentence vectors when provided (else word-vector pooling) + word/hashtag/
// mention/emoji one-hots + hate and swear counts. Blocks whose resource is
// not configured are simply omitted.
FeatureSpec build_class_spec(Label cls, const std::vector<PreparedPost>& train,
                             const FeatureResources& res, const FeatureThresholds& th,
                             std::vector<std::string>* warnings = nullptr);

// Hostile-vs-not router features: embedding block + lexicon counts only.
FeatureSpec build_level1_spec(const FeatureResources& res, const FeatureThresholds& th);

}  // namespace hostility

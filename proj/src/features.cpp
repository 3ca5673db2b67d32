#include "hostility/features.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>

#include "hostility/errors.hpp"

namespace hostility {

namespace {

void emit_warning(std::vector<std::string>* warnings, std::string msg) {
  if (warnings) {
    warnings->push_back(std::move(msg));
  } else {
    std::cerr << "warning: " << msg << "\n";
  }
}

const std::vector<std::string>& entity_list(const PreparedPost& post, VocabKind kind) {
  switch (kind) {
    case VocabKind::hashtag: return post.entities.hashtags;
    case VocabKind::mention: return post.entities.mentions;
    case VocabKind::emoji: return post.entities.emojis;
    case VocabKind::word: return post.cleaned.tokens;
  }
  return post.cleaned.tokens;  // unreachable
}

}  // namespace

std::string_view to_string(VocabKind k) {
  switch (k) {
    case VocabKind::hashtag: return "hashtag";
    case VocabKind::mention: return "mention";
    case VocabKind::emoji: return "emoji";
    case VocabKind::word: return "word";
  }
  return "word";
}

std::optional<VocabKind> parse_vocab_kind(std::string_view s) {
  if (s == "hashtag") return VocabKind::hashtag;
  if (s == "mention") return VocabKind::mention;
  if (s == "emoji") return VocabKind::emoji;
  if (s == "word") return VocabKind::word;
  return std::nullopt;
}

std::string_view to_string(EmbeddingProvider p) {
  return p == EmbeddingProvider::word_vectors ? "word_vectors" : "sample_vectors";
}

std::optional<EmbeddingProvider> parse_embedding_provider(std::string_view s) {
  if (s == "word_vectors") return EmbeddingProvider::word_vectors;
  if (s == "sample_vectors") return EmbeddingProvider::sample_vectors;
  return std::nullopt;
}

void Vocab::rebuild_index() {
  index_.clear();
  index_.reserve(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) index_.emplace(entries[i], i);
}

Vocab build_vocab(const std::vector<PreparedPost>& posts, Label cls, VocabKind kind,
                  std::size_t min_freq, std::vector<std::string>* warnings) {
  if (cls == Label::non_hostile) {
    emit_warning(warnings, "building a non_hostile vocabulary (unusual; hostile classes expected)");
  }
  // std::map keeps counting deterministic without a separate sort key.
  std::map<std::string, std::size_t> counts;
  for (const PreparedPost& pp : posts) {
    if (!pp.post->labels || !pp.post->labels->contains(cls)) continue;
    for (const std::string& e : entity_list(pp, kind)) ++counts[e];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [entry, count] : counts) {
    if (count >= min_freq) kept.emplace_back(entry, count);
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocab v;
  v.cls = cls;
  v.kind = kind;
  v.min_freq = min_freq;
  v.entries.reserve(kept.size());
  for (auto& [entry, count] : kept) v.entries.push_back(entry);
  v.rebuild_index();
  return v;
}

std::vector<double> encode_onehot(const PreparedPost& post, const Vocab& vocab) {
  std::vector<double> out(vocab.size(), 0.0);
  if (out.empty()) return out;
  for (const std::string& e : entity_list(post, vocab.kind)) {
    if (auto idx = vocab.find_entry(e)) out[*idx] = 1.0;
  }
  return out;
}

std::vector<double> pool_embeddings(const std::vector<std::string>& tokens,
                                    const EmbeddingTable& table, std::size_t max_tokens) {
  std::vector<double> sum(table.dim(), 0.0);
  std::size_t found = 0;
  for (const std::string& tok : tokens) {
    if (found >= max_tokens) break;
    if (const std::vector<double>* v = table.find(tok)) {
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += (*v)[k];
      ++found;
    }
  }
  if (found > 0) {
    for (double& x : sum) x /= static_cast<double>(found);
  }
  return sum;
}

std::pair<double, double> lexicon_count(const std::vector<std::string>& tokens,
                                        const Lexicon& lex) {
  std::size_t count = 0;
  for (const std::string& tok : tokens) {
    if (lex.contains(tok)) ++count;
  }
  const double c = static_cast<double>(count);
  return {c, c / static_cast<double>(std::max<std::size_t>(1, tokens.size()))};
}

std::size_t block_dim(const FeatureBlock& b) {
  return std::visit(
      [](const auto& blk) -> std::size_t {
        using T = std::decay_t<decltype(blk)>;
        if constexpr (std::is_same_v<T, EmbeddingBlock>) return blk.dim;
        if constexpr (std::is_same_v<T, OneHotBlock>) return blk.vocab.size();
        if constexpr (std::is_same_v<T, LexiconCountBlock>) return 2;
      },
      b);
}

std::size_t FeatureSpec::total_dim() const {
  std::size_t d = 0;
  for (const FeatureBlock& b : blocks) d += block_dim(b);
  return d;
}

namespace {

const Lexicon* resolve_lexicon(const FeatureResources& res, const std::string& name) {
  if (name == "hate") return res.hate_lexicon;
  if (name == "swear") return res.swear_lexicon;
  return nullptr;
}

// Raw embedding-block output, before standardization.
std::vector<double> embedding_raw(const PreparedPost& post, const EmbeddingBlock& blk,
                                  const FeatureResources& res) {
  if (blk.provider == EmbeddingProvider::sample_vectors) {
    if (!res.sample_vectors) throw ConfigError("feature block needs sample vectors, none loaded");
    const std::vector<double>* v = res.sample_vectors->find(post.post->id);
    if (!v) throw DataError("no sample vector for post '" + post.post->id + "'");
    return *v;
  }
  if (!res.word_vectors) throw ConfigError("feature block needs word vectors, none loaded");
  return pool_embeddings(post.cleaned.tokens, *res.word_vectors, blk.max_tokens);
}

}  // namespace

std::vector<double> assemble(const PreparedPost& post, const FeatureSpec& spec,
                             const FeatureResources& res) {
  std::vector<double> out;
  out.reserve(spec.total_dim());
  for (const FeatureBlock& b : spec.blocks) {
    std::visit(
        [&](const auto& blk) {
          using T = std::decay_t<decltype(blk)>;
          if constexpr (std::is_same_v<T, EmbeddingBlock>) {
            std::vector<double> v = embedding_raw(post, blk, res);
            if (v.size() != blk.dim) {
              throw DataError("post '" + post.post->id + "': embedding dimension " +
                              std::to_string(v.size()) + " != block dimension " +
                              std::to_string(blk.dim));
            }
            if (blk.standardize && !blk.mean.empty()) {
              for (std::size_t k = 0; k < v.size(); ++k) {
                v[k] = (v[k] - blk.mean[k]) / blk.stdev[k];
              }
            }
            out.insert(out.end(), v.begin(), v.end());
          } else if constexpr (std::is_same_v<T, OneHotBlock>) {
            std::vector<double> v = encode_onehot(post, blk.vocab);
            out.insert(out.end(), v.begin(), v.end());
          } else {
            const Lexicon* lex = resolve_lexicon(res, blk.lexicon);
            if (!lex) {
              throw ConfigError("feature block needs lexicon '" + blk.lexicon +
                                "', none loaded");
            }
            const auto [count, frac] = lexicon_count(post.cleaned.tokens, *lex);
            out.push_back(count);
            out.push_back(frac);
          }
        },
        b);
  }
  for (double x : out) {
    if (!std::isfinite(x)) {
      throw DataError("post '" + post.post->id + "': non-finite feature value");
    }
  }
  return out;
}

void fit_standardizer(FeatureSpec& spec, const std::vector<PreparedPost>& posts,
                      const FeatureResources& res) {
  for (FeatureBlock& b : spec.blocks) {
    EmbeddingBlock* blk = std::get_if<EmbeddingBlock>(&b);
    if (!blk || !blk->standardize || blk->dim == 0) continue;
    std::vector<double> mean(blk->dim, 0.0), sq(blk->dim, 0.0);
    for (const PreparedPost& pp : posts) {
      const std::vector<double> v = embedding_raw(pp, *blk, res);
      for (std::size_t k = 0; k < blk->dim; ++k) {
        mean[k] += v[k];
        sq[k] += v[k] * v[k];
      }
    }
    const double n = posts.empty() ? 1.0 : static_cast<double>(posts.size());
    blk->mean.assign(blk->dim, 0.0);
    blk->stdev.assign(blk->dim, 1.0);
    for (std::size_t k = 0; k < blk->dim; ++k) {
      blk->mean[k] = mean[k] / n;
      const double var = sq[k] / n - blk->mean[k] * blk->mean[k];
      blk->stdev[k] = var > 1e-12 ? std::sqrt(var) : 1.0;
    }
  }
}

namespace {

void add_embedding_block(FeatureSpec& spec, const FeatureResources& res,
                         const FeatureThresholds& th, bool prefer_sample_vectors) {
  if (prefer_sample_vectors && res.sample_vectors) {
    EmbeddingBlock blk;
    blk.provider = EmbeddingProvider::sample_vectors;
    blk.dim = res.sample_vectors->dim();
    blk.standardize = th.standardize_embeddings;
    spec.blocks.emplace_back(std::move(blk));
    return;
  }
  if (res.word_vectors) {
    EmbeddingBlock blk;
    blk.provider = EmbeddingProvider::word_vectors;
    blk.dim = res.word_vectors->dim();
    blk.max_tokens = th.max_tokens;
    blk.standardize = th.standardize_embeddings;
    spec.blocks.emplace_back(std::move(blk));
  }
}

}  // namespace

FeatureSpec build_class_spec(Label cls, const std::vector<PreparedPost>& train,
                             const FeatureResources& res, const FeatureThresholds& th,
                             std::vector<std::string>* warnings) {
  FeatureSpec spec;
  const bool defamation_recipe = cls == Label::defamation;
  add_embedding_block(spec, res, th, /*prefer_sample_vectors=*/!defamation_recipe);
  if (!defamation_recipe) {
    spec.blocks.emplace_back(
        OneHotBlock{build_vocab(train, cls, VocabKind::word, th.word_min_freq, warnings)});
  }
  spec.blocks.emplace_back(
      OneHotBlock{build_vocab(train, cls, VocabKind::hashtag, th.hashtag_min_freq, warnings)});
  spec.blocks.emplace_back(
      OneHotBlock{build_vocab(train, cls, VocabKind::mention, th.mention_min_freq, warnings)});
  spec.blocks.emplace_back(
      OneHotBlock{build_vocab(train, cls, VocabKind::emoji, th.emoji_min_freq, warnings)});
  if (!defamation_recipe && res.hate_lexicon) spec.blocks.emplace_back(LexiconCountBlock{"hate"});
  if (res.swear_lexicon) spec.blocks.emplace_back(LexiconCountBlock{"swear"});
  return spec;
}

FeatureSpec build_level1_spec(const FeatureResources& res, const FeatureThresholds& th) {
  FeatureSpec spec;
  add_embedding_block(spec, res, th, /*prefer_sample_vectors=*/true);
  if (res.hate_lexicon) spec.blocks.emplace_back(LexiconCountBlock{"hate"});
  if (res.swear_lexicon) spec.blocks.emplace_back(LexiconCountBlock{"swear"});
  return spec;
}

}  // namespace hostility

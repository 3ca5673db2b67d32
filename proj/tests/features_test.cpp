#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "doctest.h"

#include "hostility/corpus.hpp"
#include "hostility/errors.hpp"
#include "hostility/features.hpp"
#include "hostility/preprocess.hpp"
#include "testutil.hpp"

using namespace hostility;
using doctest::Approx;
using testutil::message_of;

namespace {

// Owns the posts so PreparedPost back-pointers stay valid.
struct PostSet {
  Lexicon stop{"stopwords"};
  std::deque<Post> posts;
  std::vector<PreparedPost> prepared;

  void add(std::string id, std::string text,
           std::optional<LabelSet> labels = std::nullopt) {
    posts.push_back(Post{std::move(id), std::move(text), labels});
    prepared.push_back(prepare(posts.back(), stop));
  }
};

LabelSet hate_only() { return LabelSet::single(Label::hate); }

}  // namespace

TEST_CASE("build_vocab") {
  SUBCASE("frequency threshold over class-positive posts") {
    PostSet ps;
    ps.add("1", "x #a #a #b", hate_only());
    ps.add("2", "#a #a #b", hate_only());
    ps.add("3", "#a #c", hate_only());
    ps.add("4", "#other #other #other", LabelSet::single(Label::fake));
    ps.add("5", "#a #a #a");  // unlabeled: ignored
    const Vocab v = build_vocab(ps.prepared, Label::hate, VocabKind::hashtag, 2);
    REQUIRE(v.entries.size() == 2);  // {#a:5, #b:2, #c:1} at min_freq 2
    CHECK(v.entries[0] == "#a");
    CHECK(v.entries[1] == "#b");
    CHECK(v.contains("#a"));
    CHECK_FALSE(v.contains("#c"));
    CHECK_FALSE(v.contains("#other"));
  }
  SUBCASE("equal counts break ties lexicographically") {
    PostSet ps;
    ps.add("1", "#y #x", hate_only());
    ps.add("2", "#y #x", hate_only());
    ps.add("3", "#x #y", hate_only());
    const Vocab v = build_vocab(ps.prepared, Label::hate, VocabKind::hashtag, 3);
    REQUIRE(v.entries.size() == 2);
    CHECK(v.entries[0] == "#x");
    CHECK(v.entries[1] == "#y");
  }
  SUBCASE("class with no posts gives an empty vocab") {
    PostSet ps;
    ps.add("1", "#a", hate_only());
    const Vocab v = build_vocab(ps.prepared, Label::defamation, VocabKind::hashtag, 1);
    CHECK(v.entries.empty());
  }
  SUBCASE("non_hostile vocab is allowed but warned") {
    PostSet ps;
    ps.add("1", "#a", LabelSet::single(Label::non_hostile));
    std::vector<std::string> warnings;
    build_vocab(ps.prepared, Label::non_hostile, VocabKind::hashtag, 1, &warnings);
    CHECK(warnings.size() == 1);
  }
  SUBCASE("raising min_freq only removes entries") {
    const Corpus corpus = testutil::make_synthetic_corpus(120, 5);
    PostSet ps;
    for (const Post& p : corpus.posts) ps.add(p.id, p.text, p.labels);
    std::vector<std::string> prev;
    for (std::size_t freq = 1; freq <= 4; ++freq) {
      const Vocab v = build_vocab(ps.prepared, Label::hate, VocabKind::word, freq);
      if (freq > 1) {
        for (const std::string& e : v.entries) {
          CHECK(std::find(prev.begin(), prev.end(), e) != prev.end());
        }
        CHECK(v.entries.size() <= prev.size());
      }
      prev = v.entries;
    }
  }
  SUBCASE("word kind counts cleaned tokens") {
    PostSet ps;
    ps.stop.insert("है");
    ps.add("1", "गद्दार गद्दार है #tag", hate_only());
    const Vocab v = build_vocab(ps.prepared, Label::hate, VocabKind::word, 2);
    REQUIRE(v.entries.size() == 1);
    CHECK(v.entries[0] == "गद्दार");  // stopword and hashtag never counted
  }
}

TEST_CASE("encode_onehot") {
  PostSet ps;
  ps.add("1", "#a #b", hate_only());
  ps.add("2", "#a", hate_only());
  const Vocab v = build_vocab(ps.prepared, Label::hate, VocabKind::hashtag, 1);
  REQUIRE(v.entries.size() == 2);  // [#a, #b] by count
  SUBCASE("presence marks position") {
    PostSet q;
    q.add("x", "#b नया");
    const std::vector<double> enc = encode_onehot(q.prepared[0], v);
    REQUIRE(enc.size() == 2);
    CHECK(enc[0] == 0.0);
    CHECK(enc[1] == 1.0);
  }
  SUBCASE("repeats stay binary") {
    PostSet q;
    q.add("x", "#b #b #b");
    const std::vector<double> enc = encode_onehot(q.prepared[0], v);
    CHECK(enc[1] == 1.0);
  }
  SUBCASE("empty vocab gives zero-length vector") {
    const Vocab empty = build_vocab({}, Label::hate, VocabKind::hashtag, 1);
    PostSet q;
    q.add("x", "#a");
    CHECK(encode_onehot(q.prepared[0], empty).empty());
  }
}

TEST_CASE("pool_embeddings") {
  EmbeddingTable table(2);
  table.insert("w1", {1.0, 2.0});
  table.insert("w2", {3.0, 4.0});
  SUBCASE("mean of found vectors") {
    const std::vector<double> v = pool_embeddings({"w1", "w2"}, table, 100);
    REQUIRE(v.size() == 2);
    CHECK(v[0] == Approx(2.0));
    CHECK(v[1] == Approx(3.0));
  }
  SUBCASE("all-OOV pools to zero") {
    const std::vector<double> v = pool_embeddings({"nope", "nada"}, table, 100);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 0.0);
  }
  SUBCASE("OOV tokens do not consume the cap") {
    const std::vector<double> v = pool_embeddings({"nope", "w1", "w2"}, table, 2);
    CHECK(v[0] == Approx(2.0));
  }
  SUBCASE("cap truncates to the first max_tokens found") {
    EmbeddingTable big(1);
    std::vector<std::string> tokens;
    for (int i = 0; i < 150; ++i) {
      const std::string tok = "t" + std::to_string(i);
      big.insert(tok, {static_cast<double>(i)});
      tokens.push_back(tok);
    }
    const std::vector<double> v = pool_embeddings(tokens, big, 100);
    double brute = 0.0;
    for (int i = 0; i < 100; ++i) brute += i;
    brute /= 100.0;
    REQUIRE(v.size() == 1);
    CHECK(v[0] == Approx(brute));
  }
}

TEST_CASE("lexicon_count") {
  Lexicon lex("swear");
  lex.insert("चोर");
  SUBCASE("multiplicity and normalization") {
    const auto [count, frac] = lexicon_count({"चोर", "चोर", "खबर"}, lex);
    CHECK(count == 2.0);
    CHECK(frac == Approx(0.6667).epsilon(1e-3));
  }
  SUBCASE("empty token list") {
    const auto [count, frac] = lexicon_count({}, lex);
    CHECK(count == 0.0);
    CHECK(frac == 0.0);
  }
  SUBCASE("no hits") {
    const auto [count, frac] = lexicon_count({"खबर"}, lex);
    CHECK(count == 0.0);
    CHECK(frac == 0.0);
  }
}

TEST_CASE("assemble") {
  Lexicon swear("swear");
  swear.insert("चोर");
  FeatureResources res;
  res.swear_lexicon = &swear;

  PostSet train;
  train.add("t1", "#a", hate_only());
  FeatureSpec spec;
  spec.blocks.emplace_back(
      OneHotBlock{build_vocab(train.prepared, Label::hate, VocabKind::hashtag, 1)});
  spec.blocks.emplace_back(LexiconCountBlock{"swear"});

  SUBCASE("blocks concatenate in spec order") {
    PostSet q;
    q.add("x", "#a चोर खबर");  // onehot hit + 1 lexicon hit over 2 tokens
    const std::vector<double> v = assemble(q.prepared[0], spec, res);
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == 1.0);
    CHECK(v[2] == Approx(0.5));
    CHECK(v.size() == spec.total_dim());
  }
  SUBCASE("missing lexicon resource is a config error") {
    FeatureResources bare;
    PostSet q;
    q.add("x", "#a");
    CHECK_THROWS_AS(assemble(q.prepared[0], spec, bare), ConfigError);
  }
  SUBCASE("missing sample vector names the post id") {
    SampleVectorTable sv(2);
    sv.insert("known", {1.0, 2.0});
    FeatureResources r2;
    r2.sample_vectors = &sv;
    FeatureSpec s2;
    EmbeddingBlock blk;
    blk.provider = EmbeddingProvider::sample_vectors;
    blk.dim = 2;
    s2.blocks.emplace_back(blk);
    PostSet q;
    q.add("mystery", "कुछ");
    const std::string msg =
        message_of<DataError>([&] { assemble(q.prepared[0], s2, r2); });
    CHECK(msg.find("mystery") != std::string::npos);
  }
  SUBCASE("per-post purity: batch order is irrelevant") {
    PostSet q;
    q.add("p1", "#a चोर");
    q.add("p2", "खबर");
    q.add("p3", "#a");
    std::vector<std::vector<double>> forward;
    for (const PreparedPost& pp : q.prepared) forward.push_back(assemble(pp, spec, res));
    for (std::size_t i = q.prepared.size(); i-- > 0;) {
      CHECK(assemble(q.prepared[i], spec, res) == forward[i]);
    }
  }
}

TEST_CASE("fit_standardizer") {
  EmbeddingTable table(2);
  table.insert("w1", {1.0, 5.0});
  table.insert("w2", {3.0, 5.0});
  FeatureResources res;
  res.word_vectors = &table;

  FeatureSpec spec;
  EmbeddingBlock blk;
  blk.provider = EmbeddingProvider::word_vectors;
  blk.dim = 2;
  blk.standardize = true;
  spec.blocks.emplace_back(blk);

  PostSet ps;
  ps.add("1", "w1");
  ps.add("2", "w2");
  fit_standardizer(spec, ps.prepared, res);

  const EmbeddingBlock& fitted = std::get<EmbeddingBlock>(spec.blocks[0]);
  REQUIRE(fitted.mean.size() == 2);
  CHECK(fitted.mean[0] == Approx(2.0));
  CHECK(fitted.stdev[0] == Approx(1.0));
  // second dimension never varies -> stdev pinned at 1 so it stays a no-op
  CHECK(fitted.mean[1] == Approx(5.0));
  CHECK(fitted.stdev[1] == Approx(1.0));

  const std::vector<double> v = assemble(ps.prepared[0], spec, res);
  CHECK(v[0] == Approx(-1.0));
  CHECK(v[1] == Approx(0.0));
}

TEST_CASE("recipe composition") {
  EmbeddingTable words(4);
  words.insert("w", {1, 2, 3, 4});
  SampleVectorTable samples(6);
  samples.insert("1", {0, 0, 0, 0, 0, 0});
  Lexicon hate_lex("hate");
  hate_lex.insert("नफरत");
  Lexicon swear("swear");
  swear.insert("गाली");

  FeatureResources res;
  res.word_vectors = &words;
  res.sample_vectors = &samples;
  res.hate_lexicon = &hate_lex;
  res.swear_lexicon = &swear;

  FeatureThresholds th;
  PostSet ps;
  ps.add("1", "नफरत #h @m \U0001F621", hate_only());

  SUBCASE("hostile-class recipe") {
    const FeatureSpec spec = build_class_spec(Label::hate, ps.prepared, res, th);
    // embedding + word/hashtag/mention/emoji one-hots + two lexicon blocks
    REQUIRE(spec.blocks.size() == 7);
    const auto& emb = std::get<EmbeddingBlock>(spec.blocks[0]);
    CHECK(emb.provider == EmbeddingProvider::sample_vectors);
    CHECK(emb.dim == 6);
    CHECK(std::get<OneHotBlock>(spec.blocks[1]).vocab.kind == VocabKind::word);
    CHECK(std::get<OneHotBlock>(spec.blocks[2]).vocab.kind == VocabKind::hashtag);
    CHECK(std::get<OneHotBlock>(spec.blocks[3]).vocab.kind == VocabKind::mention);
    CHECK(std::get<OneHotBlock>(spec.blocks[4]).vocab.kind == VocabKind::emoji);
    CHECK(std::get<LexiconCountBlock>(spec.blocks[5]).lexicon == "hate");
    CHECK(std::get<LexiconCountBlock>(spec.blocks[6]).lexicon == "swear");
  }
  SUBCASE("defamation recipe skips word one-hots and the hate lexicon") {
    const FeatureSpec spec = build_class_spec(Label::defamation, ps.prepared, res, th);
    REQUIRE(spec.blocks.size() == 5);
    const auto& emb = std::get<EmbeddingBlock>(spec.blocks[0]);
    CHECK(emb.provider == EmbeddingProvider::word_vectors);  // even with sample vectors loaded
    CHECK(emb.dim == 4);
    CHECK(std::get<OneHotBlock>(spec.blocks[1]).vocab.kind == VocabKind::hashtag);
    CHECK(std::get<LexiconCountBlock>(spec.blocks[4]).lexicon == "swear");
  }
  SUBCASE("router spec is embeddings plus lexicon counts") {
    const FeatureSpec spec = build_level1_spec(res, th);
    REQUIRE(spec.blocks.size() == 3);
    CHECK(std::get<EmbeddingBlock>(spec.blocks[0]).provider ==
          EmbeddingProvider::sample_vectors);
    CHECK(std::get<LexiconCountBlock>(spec.blocks[1]).lexicon == "hate");
    CHECK(std::get<LexiconCountBlock>(spec.blocks[2]).lexicon == "swear");
  }
  SUBCASE("unconfigured resources drop their blocks") {
    FeatureResources sparse;
    sparse.word_vectors = &words;
    const FeatureSpec spec = build_class_spec(Label::hate, ps.prepared, sparse, th);
    REQUIRE(spec.blocks.size() == 5);  // word-vector embedding + 4 one-hots
    CHECK(std::get<EmbeddingBlock>(spec.blocks[0]).provider ==
          EmbeddingProvider::word_vectors);
    const FeatureSpec none = build_class_spec(Label::hate, ps.prepared, {}, th);
    CHECK(none.blocks.size() == 4);  // one-hots only
  }
}

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "hostility/commands.hpp"
#include "hostility/corpus.hpp"
#include "hostility/ensemble.hpp"
#include "hostility/errors.hpp"
#include "hostility/rng.hpp"
#include "testutil.hpp"

using namespace hostility;
using testutil::TempDir;
using testutil::message_of;
using testutil::mock_ensemble;
using testutil::slot_mock;

namespace {

const Post kProbe{"probe", "कुछ पाठ", std::nullopt};

LabelSet expected_for(bool hostile, unsigned mask, FallbackStrategy fb,
                      const std::array<double, 4>& probs) {
  if (!hostile) return LabelSet::single(Label::non_hostile);
  LabelSet s;
  for (std::size_t d = 0; d < 4; ++d) {
    if (mask & (1u << d)) s.insert(kHostileLabels[d]);
  }
  if (!s.empty()) return s;
  if (fb == FallbackStrategy::hate_offensive) {
    s.insert(Label::hate);
    s.insert(Label::offensive);
    return s;
  }
  std::size_t best = 0;
  for (std::size_t d = 1; d < 4; ++d) {
    if (probs[d] > probs[best]) best = d;
  }
  return LabelSet::single(kHostileLabels[best]);
}

}  // namespace

TEST_CASE("all 32 outcome combinations route correctly") {
  const std::array<double, 4> probs{0.4, 0.3, 0.2, 0.1};
  for (const FallbackStrategy fb :
       {FallbackStrategy::hate_offensive, FallbackStrategy::max_probability}) {
    for (const bool hostile : {false, true}) {
      for (unsigned mask = 0; mask < 16; ++mask) {
        const std::array<bool, 4> level2{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0,
                                         (mask & 8) != 0};
        const EnsembleModel m = mock_ensemble(hostile, level2, probs, fb);
        const PredictDetail d = predict_detail(m, kProbe);
        const LabelSet want = expected_for(hostile, mask, fb, probs);

        CHECK(d.labels == want);
        CHECK(d.routed_hostile == hostile);
        CHECK(d.fallback_used == (hostile && mask == 0));
        // structural invariants
        CHECK_FALSE(d.labels.empty());
        if (d.labels.contains(Label::non_hostile)) CHECK(d.labels.size() == 1);
        d.labels.validate();
        // level-2 stays untouched for non-hostile routing
        int level2_calls = 0;
        for (std::size_t slot = 1; slot < kSlotCount; ++slot) {
          level2_calls += slot_mock(m, slot).calls;
        }
        if (!hostile) CHECK(level2_calls == 0);
      }
    }
  }
}

TEST_CASE("fallback_resolve") {
  SUBCASE("max probability picks the argmax") {
    const LabelSet s =
        fallback_resolve({0.4, 0.3, 0.2, 0.1}, FallbackStrategy::max_probability);
    CHECK(s == LabelSet::single(Label::fake));
  }
  SUBCASE("ties break in canonical label order") {
    const LabelSet s =
        fallback_resolve({0.3, 0.3, 0.3, 0.3}, FallbackStrategy::max_probability);
    CHECK(s == LabelSet::single(Label::fake));
    const LabelSet t =
        fallback_resolve({0.1, 0.3, 0.3, 0.2}, FallbackStrategy::max_probability);
    CHECK(t == LabelSet::single(Label::hate));
  }
  SUBCASE("hate_offensive ignores the probabilities") {
    LabelSet want;
    want.insert(Label::hate);
    want.insert(Label::offensive);
    CHECK(fallback_resolve({0.9, 0.0, 0.0, 0.0}, FallbackStrategy::hate_offensive) == want);
    CHECK(fallback_resolve({0.0, 0.0, 0.0, 0.9}, FallbackStrategy::hate_offensive) == want);
  }
  SUBCASE("raising a winning probability keeps it winning") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
      std::array<double, 4> probs;
      for (double& p : probs) p = rng.uniform();
      const LabelSet base =
          fallback_resolve(probs, FallbackStrategy::max_probability);
      const Label winner = base.sorted()[0];
      const std::size_t k = static_cast<std::size_t>(winner);
      probs[k] = std::min(1.0, probs[k] + rng.uniform());
      const LabelSet raised =
          fallback_resolve(probs, FallbackStrategy::max_probability);
      CHECK(raised.contains(winner));
    }
  }
}

TEST_CASE("random mock outcomes never produce an invalid set") {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const bool hostile = rng.uniform() < 0.5;
    std::array<bool, 4> level2;
    std::array<double, 4> probs;
    for (std::size_t d = 0; d < 4; ++d) {
      level2[d] = rng.uniform() < 0.3;
      probs[d] = rng.uniform();
    }
    const FallbackStrategy fb = rng.uniform() < 0.5 ? FallbackStrategy::hate_offensive
                                                    : FallbackStrategy::max_probability;
    const LabelSet s = predict(mock_ensemble(hostile, level2, probs, fb), kProbe);
    CHECK_FALSE(s.empty());
    s.validate();  // throws if non_hostile is mixed in
  }
}

TEST_CASE("fallback counting and failure collection in batches") {
  Corpus corpus;
  corpus.posts = {Post{"a", "एक", std::nullopt}, Post{"b", "दो", std::nullopt},
                  Post{"c", "तीन", std::nullopt}};

  SUBCASE("fallback count matches the routed-empty rows") {
    // hostile routing with an empty union on every post
    const EnsembleModel m = mock_ensemble(true, {false, false, false, false},
                                          {0.1, 0.2, 0.3, 0.4}, FallbackStrategy::hate_offensive);
    const BatchResult r = predict_batch(m, corpus);
    CHECK(r.predictions.size() == 3);
    CHECK(r.fallback_count == 3);
    CHECK(r.failures.empty());
  }
  SUBCASE("no fallback when the union is non-empty") {
    const EnsembleModel m = mock_ensemble(true, {true, false, false, false},
                                          {0.9, 0.2, 0.3, 0.4}, FallbackStrategy::hate_offensive);
    CHECK(predict_batch(m, corpus).fallback_count == 0);
  }
  SUBCASE("a per-post feature error is collected, not fatal") {
    EnsembleModel m = mock_ensemble(true, {true, false, false, false}, {0.9, 0.2, 0.3, 0.4},
                                    FallbackStrategy::hate_offensive);
    // level-1 needs a sample vector; post "b" has none
    SampleVectorTable sv(2);
    sv.insert("a", {0.0, 0.0});
    sv.insert("c", {1.0, 1.0});
    m.resources.sample_vectors = std::move(sv);
    EmbeddingBlock blk;
    blk.provider = EmbeddingProvider::sample_vectors;
    blk.dim = 2;
    m.level1.spec.blocks.emplace_back(blk);

    const BatchResult r = predict_batch(m, corpus);
    REQUIRE(r.predictions.size() == 2);
    CHECK(r.predictions[0].id == "a");
    CHECK(r.predictions[1].id == "c");
    REQUIRE(r.failures.size() == 1);
    CHECK(r.failures[0].first == "b");
    CHECK(r.failures[0].second.find("b") != std::string::npos);
  }
  SUBCASE("empty corpus gives empty output") {
    const EnsembleModel m = mock_ensemble(true, {true, false, false, false},
                                          {0.9, 0.2, 0.3, 0.4}, FallbackStrategy::hate_offensive);
    const BatchResult r = predict_batch(m, Corpus{});
    CHECK(r.predictions.empty());
    CHECK(r.fallback_count == 0);
  }
}

namespace {

EnsembleConfig all_ngram_config() {
  EnsembleConfig cfg = EnsembleConfig::defaults();
  cfg.level1 = BackendChoice::parse("ngram");
  for (auto& choice : cfg.level2) choice = BackendChoice::parse("ngram");
  return cfg;
}

}  // namespace

TEST_CASE("train_ensemble slices the corpus by level") {
  const Corpus corpus = testutil::make_synthetic_corpus(160, 3);
  const CorpusStats cs = corpus_stats(corpus);

  TrainStats stats;
  const EnsembleModel m =
      train_ensemble(corpus, all_ngram_config(), ModelResources{}, &stats);

  CHECK(stats.samples[0] == corpus.size());
  CHECK(stats.positives[0] == cs.total_hostile);
  for (const Label d : kHostileLabels) {
    const std::size_t slot = 1 + static_cast<std::size_t>(d);
    CHECK(stats.samples[slot] == cs.total_hostile);  // hostile subset only
    CHECK(stats.positives[slot] == cs.per_label[static_cast<std::size_t>(d)]);
    CHECK(stats.positives[slot] < stats.samples[slot]);
  }
  CHECK(m.level1.clf->kind() == "ngram");

  SUBCASE("held-out posts route plausibly") {
    const Corpus fresh = testutil::make_synthetic_corpus(40, 77);
    std::size_t agree = 0;
    for (const Post& p : fresh.posts) {
      const LabelSet got = predict(m, p);
      got.validate();
      if (got.hostile() == p.labels->hostile()) ++agree;
    }
    CHECK(agree >= 32);  // 80% on an easy synthetic split
  }
}

TEST_CASE("train_ensemble error reporting") {
  SUBCASE("degenerate hostile dimension names the label") {
    Corpus corpus = testutil::make_synthetic_corpus(60, 9);
    for (Post& p : corpus.posts) {  // wipe defamation everywhere
      if (p.labels->contains(Label::defamation)) {
        LabelSet fixed = LabelSet::single(Label::fake);
        p.labels = fixed;
      }
    }
    const std::string msg = message_of<TrainError>(
        [&] { train_ensemble(corpus, all_ngram_config(), ModelResources{}); });
    CHECK(msg.find("defamation") != std::string::npos);
  }
  SUBCASE("all non-hostile cannot train") {
    Corpus corpus;
    for (int i = 0; i < 10; ++i) {
      corpus.posts.push_back(Post{"n" + std::to_string(i), "आम खबर " + std::to_string(i),
                                  LabelSet::single(Label::non_hostile)});
    }
    CHECK_THROWS_AS(train_ensemble(corpus, all_ngram_config(), ModelResources{}), TrainError);
  }
  SUBCASE("unlabeled post rejected") {
    Corpus corpus = testutil::make_synthetic_corpus(30, 1);
    corpus.posts[5].labels.reset();
    CHECK_THROWS_AS(train_ensemble(corpus, all_ngram_config(), ModelResources{}), DataError);
  }
}

TEST_CASE("training twice gives interchangeable models") {
  const Corpus corpus = testutil::make_synthetic_corpus(120, 13);
  const EnsembleConfig cfg = all_ngram_config();
  const EnsembleModel a = train_ensemble(corpus, cfg, ModelResources{});
  const EnsembleModel b = train_ensemble(corpus, cfg, ModelResources{});
  const Corpus fresh = testutil::make_synthetic_corpus(30, 31);
  for (const Post& p : fresh.posts) {
    CHECK(predict(a, p) == predict(b, p));
  }
}

TEST_CASE("label powerset") {
  SUBCASE("combination classes mirror the training set") {
    Corpus corpus;
    auto add = [&](const std::string& id, const std::string& text, LabelSet ls) {
      corpus.posts.push_back(Post{id, text, ls});
    };
    LabelSet fake_hate = LabelSet::single(Label::fake);
    fake_hate.insert(Label::hate);
    for (int i = 0; i < 4; ++i) {
      add("f" + std::to_string(i), "झूठ वायरल खबर " + std::to_string(i),
          LabelSet::single(Label::fake));
      add("fh" + std::to_string(i), "झूठ नफरत कौम " + std::to_string(i), fake_hate);
      add("n" + std::to_string(i), "आम शांत खबर " + std::to_string(i),
          LabelSet::single(Label::non_hostile));
    }
    const LabelPowersetModel m = train_label_powerset(corpus, all_ngram_config());
    REQUIRE(m.combos.size() == 3);
    REQUIRE(m.scorers.size() == 3);

    // closed world: every prediction is one of the trained combinations
    std::set<std::uint8_t> seen;
    for (const LabelSet& c : m.combos) seen.insert(c.bits());
    const Corpus fresh = testutil::make_synthetic_corpus(25, 55);
    for (const Post& p : fresh.posts) {
      const LabelSet got = predict_lp(m, p);
      got.validate();
      CHECK(seen.count(got.bits()) == 1);
    }
  }
  SUBCASE("learns the synthetic corpus roughly") {
    const Corpus corpus = testutil::make_synthetic_corpus(200, 19);
    const LabelPowersetModel m = train_label_powerset(corpus, all_ngram_config());
    CHECK(m.combos.size() >= 3);
    const BatchResult r = predict_batch_lp(m, corpus);
    CHECK(r.predictions.size() == corpus.size());
    CHECK(r.failures.empty());
  }
  SUBCASE("single-combination corpus is degenerate") {
    Corpus corpus;
    for (int i = 0; i < 6; ++i) {
      corpus.posts.push_back(
          Post{"p" + std::to_string(i), "पाठ " + std::to_string(i),
               LabelSet::single(Label::non_hostile)});
    }
    CHECK_THROWS_AS(train_label_powerset(corpus, all_ngram_config()), TrainError);
  }
}

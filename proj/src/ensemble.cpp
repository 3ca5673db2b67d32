#include "hostility/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <limits>
#include <map>
#include <thread>

#include "hostility/errors.hpp"
#include "hostility/rng.hpp"

namespace hostility {

std::string_view to_string(FallbackStrategy s) {
  return s == FallbackStrategy::hate_offensive ? "hate_offensive" : "max_prob";
}

std::optional<FallbackStrategy> parse_fallback(std::string_view s) {
  if (s == "hate_offensive") return FallbackStrategy::hate_offensive;
  if (s == "max_prob" || s == "max_probability") return FallbackStrategy::max_probability;
  return std::nullopt;
}

std::string_view to_string(BackendKind k) {
  switch (k) {
    case BackendKind::svm: return "svm";
    case BackendKind::mlp: return "mlp";
    case BackendKind::ngram: return "ngram";
    case BackendKind::external: return "external";
  }
  return "ngram";
}

std::string BackendChoice::spec_string() const {
  if (kind == BackendKind::external) return "external:" + external_path;
  return std::string(to_string(kind));
}

BackendChoice BackendChoice::parse(std::string_view s) {
  BackendChoice b;
  if (s == "svm") {
    b.kind = BackendKind::svm;
  } else if (s == "mlp") {
    b.kind = BackendKind::mlp;
  } else if (s == "ngram") {
    b.kind = BackendKind::ngram;
  } else if (s.substr(0, 9) == "external:" && s.size() > 9) {
    b.kind = BackendKind::external;
    b.external_path = std::string(s.substr(9));
  } else {
    throw ConfigError("unknown backend '" + std::string(s) +
                      "' (expected svm|mlp|ngram|external:<path>)");
  }
  return b;
}

EnsembleConfig EnsembleConfig::defaults() {
  EnsembleConfig cfg;
  cfg.level1.kind = BackendKind::ngram;
  cfg.level2[static_cast<std::size_t>(Label::fake)].kind = BackendKind::ngram;
  cfg.level2[static_cast<std::size_t>(Label::hate)].kind = BackendKind::mlp;
  cfg.level2[static_cast<std::size_t>(Label::offensive)].kind = BackendKind::ngram;
  cfg.level2[static_cast<std::size_t>(Label::defamation)].kind = BackendKind::svm;
  return cfg;
}

FeatureResources ModelResources::feature_handles() const {
  FeatureResources h;
  if (word_vectors) h.word_vectors = &*word_vectors;
  if (sample_vectors) h.sample_vectors = &*sample_vectors;
  if (hate_lexicon) h.hate_lexicon = &*hate_lexicon;
  if (swear_lexicon) h.swear_lexicon = &*swear_lexicon;
  return h;
}

std::string_view slot_name(std::size_t slot) {
  if (slot == 0) return "hostile";
  return to_string(static_cast<Label>(slot - 1));
}

namespace {

void run_tasks(std::vector<std::function<void()>>& tasks, std::size_t jobs) {
  if (jobs <= 1 || tasks.size() <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      tasks[i]();
    }
  };
  std::vector<std::thread> threads;
  const std::size_t count = std::min(jobs, tasks.size());
  threads.reserve(count);
  for (std::size_t t = 0; t < count; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
}

struct SlotPlan {
  std::vector<std::size_t> sample_idx;  // into the prepared list
  std::vector<int> y;
  std::size_t positives = 0;
};

std::unique_ptr<BinaryClassifier> train_slot(const EnsembleConfig& cfg, std::size_t slot,
                                             const BackendChoice& backend, const FeatureSpec& spec,
                                             const std::vector<PreparedPost>& prepared,
                                             const SlotPlan& plan,
                                             const FeatureResources& handles) {
  switch (backend.kind) {
    case BackendKind::svm:
    case BackendKind::mlp: {
      std::vector<std::vector<double>> X;
      X.reserve(plan.sample_idx.size());
      for (std::size_t i : plan.sample_idx) X.push_back(assemble(prepared[i], spec, handles));
      if (backend.kind == BackendKind::svm) {
        return std::make_unique<SvmModel>(train_svm(X, plan.y, cfg.svm));
      }
      return std::make_unique<MlpModel>(
          train_mlp(X, plan.y, cfg.mlp, derive_seed(cfg.seed, slot)));
    }
    case BackendKind::ngram: {
      std::vector<std::string> texts;
      texts.reserve(plan.sample_idx.size());
      for (std::size_t i : plan.sample_idx) texts.push_back(prepared[i].post->text);
      return std::make_unique<NgramLinearModel>(
          train_ngram_linear(texts, plan.y, cfg.ngram, derive_seed(cfg.seed, slot)));
    }
    case BackendKind::external:
      return std::make_unique<ExternalScores>(load_external_scores(backend.external_path));
  }
  throw ConfigError("unknown backend kind");
}

void validate_labeled(const Corpus& corpus, const char* what) {
  if (corpus.posts.empty()) throw DataError(std::string(what) + ": empty corpus");
  for (const Post& p : corpus.posts) {
    if (!p.labels) throw DataError(std::string(what) + ": unlabeled post '" + p.id + "'");
    p.labels->validate();
  }
}

}  // namespace

EnsembleModel train_ensemble(const Corpus& corpus, const EnsembleConfig& cfg, ModelResources res,
                             TrainStats* stats, std::vector<std::string>* warnings) {
  validate_labeled(corpus, "training corpus");

  EnsembleModel model;
  model.config = cfg;
  model.resources = std::move(res);
  const FeatureResources handles = model.resources.feature_handles();

  std::vector<PreparedPost> prepared;
  prepared.reserve(corpus.size());
  for (const Post& p : corpus.posts) {
    prepared.push_back(prepare(p, model.resources.stopwords, model.resources.emoji));
  }

  std::array<SlotPlan, kSlotCount> plans;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    const LabelSet& ls = *prepared[i].post->labels;
    plans[0].sample_idx.push_back(i);
    plans[0].y.push_back(ls.hostile() ? 1 : 0);
    if (!ls.hostile()) continue;
    ++plans[0].positives;
    for (Label d : kHostileLabels) {
      SlotPlan& plan = plans[1 + static_cast<std::size_t>(d)];
      plan.sample_idx.push_back(i);
      const bool pos = ls.contains(d);
      plan.y.push_back(pos ? 1 : 0);
      if (pos) ++plan.positives;
    }
  }
  if (plans[0].positives == 0) throw TrainError("training corpus has no hostile samples");
  if (plans[0].positives == plans[0].y.size()) {
    throw TrainError("training corpus has no non-hostile samples");
  }
  for (Label d : kHostileLabels) {
    const SlotPlan& plan = plans[1 + static_cast<std::size_t>(d)];
    const std::size_t neg = plan.y.size() - plan.positives;
    if (plan.positives < 2 || neg < 2) {
      throw TrainError("degenerate class '" + std::string(to_string(d)) +
                       "' in hostile subset: " + std::to_string(plan.positives) +
                       " positives, " + std::to_string(neg) + " negatives");
    }
  }

  // Specs (vocabularies + standardizer stats) are built sequentially so
  // warnings stay ordered; only the heavy training is parallel.
  for (std::size_t slot = 0; slot < kSlotCount; ++slot) {
    TrainedSlot& ts = model.slot(slot);
    ts.backend = slot == 0 ? cfg.level1 : cfg.level2[slot - 1];
    if (ts.backend.kind != BackendKind::svm && ts.backend.kind != BackendKind::mlp) continue;
    ts.spec = slot == 0
                  ? build_level1_spec(handles, cfg.features)
                  : build_class_spec(static_cast<Label>(slot - 1), prepared, handles, cfg.features,
                                     warnings);
    std::vector<PreparedPost> slot_posts;  // the slot's own training samples
    slot_posts.reserve(plans[slot].sample_idx.size());
    for (std::size_t i : plans[slot].sample_idx) slot_posts.push_back(prepared[i]);
    fit_standardizer(ts.spec, slot_posts, handles);
    if (ts.spec.total_dim() == 0) {
      throw TrainError("slot '" + std::string(slot_name(slot)) +
                       "': empty feature spec (no embeddings, vocabularies, or lexicons)");
    }
  }

  std::array<std::exception_ptr, kSlotCount> errors{};
  std::vector<std::function<void()>> tasks;
  for (std::size_t slot = 0; slot < kSlotCount; ++slot) {
    tasks.push_back([&, slot] {
      try {
        const auto t0 = std::chrono::steady_clock::now();
        TrainedSlot& ts = model.slot(slot);
        ts.clf = train_slot(cfg, slot, ts.backend, ts.spec, prepared, plans[slot], handles);
        if (stats) {
          stats->seconds[slot] =
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          stats->samples[slot] = plans[slot].y.size();
          stats->positives[slot] = plans[slot].positives;
          stats->feature_dims[slot] = ts.spec.total_dim();
        }
      } catch (...) {
        errors[slot] = std::current_exception();
      }
    });
  }
  run_tasks(tasks, cfg.jobs);
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return model;
}

LabelSet fallback_resolve(const std::array<double, 4>& probs, FallbackStrategy strategy) {
  LabelSet out;
  if (strategy == FallbackStrategy::hate_offensive) {
    out.insert(Label::hate);
    out.insert(Label::offensive);
    return out;
  }
  std::size_t best = 0;
  for (std::size_t d = 1; d < probs.size(); ++d) {
    if (probs[d] > probs[best]) best = d;  // ties keep the canonical-order winner
  }
  out.insert(static_cast<Label>(best));
  return out;
}

namespace {

struct SlotOutcome {
  bool positive = false;
  double prob = 0.0;
};

SlotOutcome score_slot(const TrainedSlot& slot, const PreparedPost& pp,
                       const FeatureResources& handles) {
  ClassifierInput in;
  in.post = pp.post;
  std::vector<double> feats;
  if (!slot.spec.blocks.empty()) {
    feats = assemble(pp, slot.spec, handles);
    in.features = &feats;
  }
  return {slot.clf->predict(in), slot.clf->prob(in)};
}

}  // namespace

PredictDetail predict_detail(const EnsembleModel& m, const Post& post) {
  const FeatureResources handles = m.resources.feature_handles();
  const PreparedPost pp = prepare(post, m.resources.stopwords, m.resources.emoji);

  PredictDetail detail;
  const SlotOutcome level1 = score_slot(m.level1, pp, handles);
  detail.level1_prob = level1.prob;
  detail.routed_hostile = level1.positive;
  if (!level1.positive) {
    detail.labels.insert(Label::non_hostile);
    return detail;
  }
  for (Label d : kHostileLabels) {
    const std::size_t k = static_cast<std::size_t>(d);
    const SlotOutcome out = score_slot(m.level2[k], pp, handles);
    detail.level2_probs[k] = out.prob;
    if (out.positive) detail.labels.insert(d);
  }
  if (detail.labels.empty()) {
    detail.labels = fallback_resolve(detail.level2_probs, m.config.fallback);
    detail.fallback_used = true;
  }
  return detail;
}

LabelSet predict(const EnsembleModel& m, const Post& post) {
  return predict_detail(m, post).labels;
}

BatchResult predict_batch(const EnsembleModel& m, const Corpus& corpus) {
  BatchResult result;
  result.predictions.reserve(corpus.size());
  for (const Post& p : corpus.posts) {
    try {
      const PredictDetail d = predict_detail(m, p);
      result.predictions.push_back({p.id, d.labels});
      if (d.fallback_used) ++result.fallback_count;
    } catch (const std::exception& e) {
      result.failures.emplace_back(p.id, e.what());
    }
  }
  return result;
}

LabelPowersetModel train_label_powerset(const Corpus& corpus, const EnsembleConfig& cfg,
                                        std::vector<std::string>* warnings) {
  (void)warnings;
  validate_labeled(corpus, "training corpus");

  // std::map keys give the deterministic canonical-string order directly.
  std::map<std::string, LabelSet> combos;
  for (const Post& p : corpus.posts) combos.emplace(p.labels->to_string(), *p.labels);
  if (combos.size() < 2) {
    throw TrainError("label powerset needs at least two distinct label combinations");
  }

  LabelPowersetModel model;
  model.config = cfg;
  std::vector<std::string> texts;
  texts.reserve(corpus.size());
  for (const Post& p : corpus.posts) texts.push_back(p.text);

  std::size_t combo_index = 0;
  for (const auto& [key, ls] : combos) {
    std::vector<int> y;
    y.reserve(corpus.size());
    std::size_t pos = 0;
    for (const Post& p : corpus.posts) {
      const bool match = *p.labels == ls;
      y.push_back(match ? 1 : 0);
      pos += match ? 1 : 0;
    }
    const std::size_t neg = y.size() - pos;
    if (pos < 2 || neg < 2) {
      throw TrainError("degenerate combination '" + key + "': " + std::to_string(pos) +
                       " positives, " + std::to_string(neg) + " negatives");
    }
    model.combos.push_back(ls);
    model.scorers.push_back(
        train_ngram_linear(texts, y, cfg.ngram, derive_seed(cfg.seed, 100 + combo_index)));
    ++combo_index;
  }
  return model;
}

LabelSet predict_lp(const LabelPowersetModel& m, const Post& post) {
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m.scorers.size(); ++k) {
    const double s = m.scorers[k].score_text(post.text);
    if (s > best_score) {  // ties keep the earlier (canonical-order) combo
      best_score = s;
      best = k;
    }
  }
  return m.combos[best];
}

BatchResult predict_batch_lp(const LabelPowersetModel& m, const Corpus& corpus) {
  BatchResult result;
  result.predictions.reserve(corpus.size());
  for (const Post& p : corpus.posts) {
    try {
      result.predictions.push_back({p.id, predict_lp(m, p)});
    } catch (const std::exception& e) {
      result.failures.emplace_back(p.id, e.what());
    }
  }
  return result;
}

}  // namespace hostility

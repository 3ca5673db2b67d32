#include "hostility/commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "hostility/errors.hpp"
#include "hostility/model_store.hpp"

namespace hostility {

using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
  if (!out) throw DataError("write failed: " + path);
}

json stats_json_obj(const CorpusStats& s) {
  json j;
  for (Label d : kHostileLabels) j[std::string(to_string(d))] = s.count(d);
  j["hostile"] = s.total_hostile;
  j["non_hostile"] = s.non_hostile;
  j["total"] = s.total;
  return j;
}

// Vocab/model sizes per slot, for the train summary.
json slot_sizes(const TrainedSlot& slot) {
  json sizes = json::object();
  for (const FeatureBlock& b : slot.spec.blocks) {
    if (const auto* oh = std::get_if<OneHotBlock>(&b)) {
      sizes[std::string(to_string(oh->vocab.kind))] = oh->vocab.size();
    }
  }
  if (const auto* ng = dynamic_cast<const NgramLinearModel*>(slot.clf.get())) {
    sizes["ngram"] = ng->vocab.size();
  }
  return sizes;
}

std::string truncated_id_list(const std::vector<std::string>& ids) {
  constexpr std::size_t kShow = 5;
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < kShow; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > kShow) {
    out += " (+" + std::to_string(ids.size() - kShow) + " more)";
  }
  return out;
}

}  // namespace

ModelResources load_resources(const RunConfig& cfg) {
  ModelResources res;
  const RunConfig::Paths& p = cfg.paths;
  if (!p.stopwords.empty()) res.stopwords = load_stopwords(p.stopwords);
  if (!p.hate_lexicon.empty()) res.hate_lexicon = load_lexicon(p.hate_lexicon, "hate");
  if (!p.swear_lexicon.empty()) res.swear_lexicon = load_lexicon(p.swear_lexicon, "swear");
  if (!p.word_vectors.empty()) {
    res.word_vectors = load_word_vectors(p.word_vectors);
    res.word_vectors_path = p.word_vectors;
  }
  if (!p.sample_vectors.empty()) {
    res.sample_vectors = load_sample_vectors(p.sample_vectors);
    res.sample_vectors_path = p.sample_vectors;
  }
  if (!p.emoji_ranges.empty()) res.emoji = EmojiRanges::load(p.emoji_ranges);
  return res;
}

TrainOutcome cmd_train(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.paths.train.empty()) throw ConfigError("no training corpus configured (paths.train)");
  if (out_dir.empty()) throw ConfigError("no output directory for the model bundle");

  const auto start = std::chrono::steady_clock::now();
  ModelResources res = load_resources(cfg);
  const Corpus corpus = load_corpus(cfg.paths.train, cfg.format, cfg.columns);
  const CorpusStats stats = corpus_stats(corpus);
  const std::string cfg_json = run_config_json(cfg);

  json summary;
  summary["command"] = "train";
  summary["bundle"] = out_dir;
  summary["config_hash"] = config_hash(cfg);
  summary["strategy"] = std::string(to_string(cfg.strategy));
  summary["seed"] = cfg.ensemble.seed;
  summary["corpus"] = stats_json_obj(stats);
  summary["corpus"]["path"] = cfg.paths.train;

  Model model;
  model.strategy = cfg.strategy;
  if (cfg.strategy == Strategy::binary_relevance) {
    TrainStats tstats;
    model.br.emplace(train_ensemble(corpus, cfg.ensemble, std::move(res), &tstats));
    json slots = json::object();
    for (std::size_t i = 0; i < kSlotCount; ++i) {
      const TrainedSlot& slot = model.br->slot(i);
      slots[std::string(slot_name(i))] = {
          {"backend", slot.backend.spec_string()}, {"samples", tstats.samples[i]},
          {"positives", tstats.positives[i]},      {"feature_dim", tstats.feature_dims[i]},
          {"seconds", tstats.seconds[i]},          {"vocab_sizes", slot_sizes(slot)}};
    }
    summary["classifiers"] = slots;
  } else {
    model.lp.emplace(train_label_powerset(corpus, cfg.ensemble));
    json combos = json::object();
    for (std::size_t k = 0; k < model.lp->combos.size(); ++k) {
      combos[model.lp->combos[k].to_string()] = {
          {"ngram_vocab", model.lp->scorers[k].vocab.size()}};
    }
    summary["classifiers"] = combos;
  }

  save_model(model, out_dir, cfg_json);
  summary["wall_seconds"] = seconds_since(start);
  return {out_dir, summary.dump(2) + "\n"};
}

PredictOutcome cmd_predict(const std::string& bundle_dir, const std::string& input_path,
                           const std::string& out_path, FileFormat format,
                           const ColumnMapping& columns) {
  if (out_path.empty()) throw ConfigError("no output path for predictions");
  const Model model = load_model(bundle_dir);
  const Corpus corpus = load_corpus(input_path, format, columns);

  const BatchResult batch = model.strategy == Strategy::binary_relevance
                                ? predict_batch(*model.br, corpus)
                                : predict_batch_lp(*model.lp, corpus);
  write_predictions(batch.predictions, out_path);

  json summary;
  summary["command"] = "predict";
  summary["model"] = bundle_dir;
  summary["config_hash"] =
      model.run_config.empty() ? json(nullptr) : json(fnv1a_hex(model.run_config));
  summary["strategy"] = std::string(to_string(model.strategy));
  summary["input"] = input_path;
  summary["output"] = out_path;
  summary["posts"] = corpus.size();
  summary["predicted"] = batch.predictions.size();
  summary["failures"] = batch.failures.size();
  summary["fallback_count"] = batch.fallback_count;
  const std::string summary_text = summary.dump(2) + "\n";
  write_file(out_path + ".summary.json", summary_text);
  return {summary_text, batch.fallback_count, batch.failures};
}

EvalOutcome cmd_eval(const std::string& gold_path, const std::string& pred_path, EvalScope scope,
                     FileFormat format, const ColumnMapping& columns) {
  const Corpus gold_corpus = load_corpus(gold_path, format, columns);
  std::vector<LabelSet> gold;
  gold.reserve(gold_corpus.size());
  for (const Post& post : gold_corpus.posts) {
    if (!post.labels) throw DataError(gold_path + ": unlabeled gold post '" + post.id + "'");
    gold.push_back(*post.labels);
  }

  const std::vector<Prediction> rows = load_predictions(pred_path);
  std::unordered_map<std::string, const LabelSet*> by_id;
  by_id.reserve(rows.size());
  for (const Prediction& r : rows) by_id.emplace(r.id, &r.labels);

  std::vector<std::string> missing, extra;
  std::unordered_set<std::string> gold_ids;
  gold_ids.reserve(gold_corpus.size());
  for (const Post& post : gold_corpus.posts) {
    gold_ids.insert(post.id);
    if (!by_id.count(post.id)) missing.push_back(post.id);
  }
  for (const Prediction& r : rows) {
    if (!gold_ids.count(r.id)) extra.push_back(r.id);
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "predictions do not match the gold corpus:";
    if (!missing.empty()) {
      msg += " missing " + std::to_string(missing.size()) + " id" +
             (missing.size() == 1 ? "" : "s") + " (" + truncated_id_list(missing) + ")";
    }
    if (!extra.empty()) {
      if (!missing.empty()) msg += ";";
      msg += " " + std::to_string(extra.size()) + " unknown (" + truncated_id_list(extra) + ")";
    }
    throw DataError(msg);
  }

  std::vector<LabelSet> pred;
  pred.reserve(gold_corpus.size());
  for (const Post& post : gold_corpus.posts) pred.push_back(*by_id.at(post.id));

  EvalReport report = evaluate(gold, pred, scope);

  // Fallback echo from the predict run, when its sidecar is around.
  std::ifstream sidecar(pred_path + ".summary.json", std::ios::binary);
  if (sidecar) {
    try {
      const json s = json::parse(sidecar);
      if (s.contains("fallback_count") && s["fallback_count"].is_number_unsigned()) {
        report.fallback_count = s["fallback_count"].get<std::size_t>();
      }
    } catch (const json::exception&) {
      std::cerr << "warning: ignoring unreadable sidecar " << pred_path << ".summary.json\n";
    }
  }

  return {report, render_table(report), report_to_json(report)};
}

StatsOutcome cmd_stats(const std::string& input_path, FileFormat format,
                       const ColumnMapping& columns) {
  const Corpus corpus = load_corpus(input_path, format, columns);
  const CorpusStats stats = corpus_stats(corpus);

  std::ostringstream table;
  char line[64];
  auto put = [&](std::string_view name, std::size_t count) {
    std::snprintf(line, sizeof(line), "%-12.*s %8zu\n", static_cast<int>(name.size()),
                  name.data(), count);
    table << line;
  };
  for (Label d : kHostileLabels) put(to_string(d), stats.count(d));
  put("hostile", stats.total_hostile);
  put(file_tag(Label::non_hostile), stats.non_hostile);
  put("total", stats.total);

  return {stats, table.str(), stats_json_obj(stats).dump(2) + "\n"};
}

}  // namespace hostility

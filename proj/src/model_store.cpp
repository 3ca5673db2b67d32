#include "hostility/model_store.hpp"

#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "hostility/errors.hpp"

namespace hostility {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Strategy s) {
  return s == Strategy::binary_relevance ? "binary_relevance" : "label_powerset";
}

std::optional<Strategy> parse_strategy(std::string_view s) {
  if (s == "binary_relevance") return Strategy::binary_relevance;
  if (s == "label_powerset") return Strategy::label_powerset;
  return std::nullopt;
}

namespace {

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path.string());
  out << content;
  if (!out) throw DataError("write failed: " + path.string());
}

json parse_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("missing component file: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("corrupt model file " + path.string() + ": " + e.what());
  }
}

// ---- serialization ----

json thresholds_json(const FeatureThresholds& t) {
  return {{"hashtag_min_freq", t.hashtag_min_freq}, {"mention_min_freq", t.mention_min_freq},
          {"emoji_min_freq", t.emoji_min_freq},     {"word_min_freq", t.word_min_freq},
          {"max_tokens", t.max_tokens},             {"standardize_embeddings",
                                                     t.standardize_embeddings}};
}

json svm_config_json(const SvmConfig& c) {
  json j = {{"kernel", std::string(to_string(c.kernel))},
            {"C", c.C},
            {"tol", c.tol},
            {"max_passes", c.max_passes},
            {"weighting", std::string(to_string(c.weighting))}};
  j["gamma"] = c.gamma ? json(*c.gamma) : json(nullptr);
  return j;
}

json mlp_config_json(const MlpConfig& c) {
  return {{"hidden", c.hidden},     {"epochs", c.epochs},
          {"lr", c.lr},             {"batch", c.batch},
          {"momentum", c.momentum}, {"class_weight", c.class_weight}};
}

json ngram_config_json(const NgramConfig& c) {
  return {{"epochs", c.epochs}, {"lr", c.lr}, {"l2", c.l2}, {"min_df", c.min_df}};
}

json config_json(const EnsembleConfig& cfg) {
  json backends;
  backends["hostile"] = cfg.level1.spec_string();
  for (Label d : kHostileLabels) {
    backends[std::string(to_string(d))] = cfg.level2[static_cast<std::size_t>(d)].spec_string();
  }
  return {{"seed", cfg.seed},
          {"fallback", std::string(to_string(cfg.fallback))},
          {"features", thresholds_json(cfg.features)},
          {"svm", svm_config_json(cfg.svm)},
          {"mlp", mlp_config_json(cfg.mlp)},
          {"ngram", ngram_config_json(cfg.ngram)},
          {"backends", backends}};
}

json resources_json(const ModelResources& res) {
  json j;
  j["stopwords"] = res.stopwords.sorted_tokens();
  j["hate_lexicon"] = res.hate_lexicon ? json(res.hate_lexicon->sorted_tokens()) : json(nullptr);
  j["swear_lexicon"] = res.swear_lexicon ? json(res.swear_lexicon->sorted_tokens()) : json(nullptr);
  if (res.word_vectors) {
    if (res.word_vectors_path.empty()) {
      throw ConfigError("cannot persist word vectors without a source path");
    }
    j["word_vectors"] = {{"path", res.word_vectors_path}, {"dim", res.word_vectors->dim()}};
  } else {
    j["word_vectors"] = json(nullptr);
  }
  if (res.sample_vectors) {
    if (res.sample_vectors_path.empty()) {
      throw ConfigError("cannot persist sample vectors without a source path");
    }
    j["sample_vectors"] = {{"path", res.sample_vectors_path}, {"dim", res.sample_vectors->dim()}};
  } else {
    j["sample_vectors"] = json(nullptr);
  }
  json ranges = json::array();
  for (const auto& [lo, hi] : res.emoji.ranges()) {
    ranges.push_back({static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi)});
  }
  j["emoji_ranges"] = ranges;
  return j;
}

json block_json(const FeatureBlock& b) {
  return std::visit(
      [](const auto& blk) -> json {
        using T = std::decay_t<decltype(blk)>;
        if constexpr (std::is_same_v<T, EmbeddingBlock>) {
          return {{"type", "embedding"},
                  {"provider", std::string(to_string(blk.provider))},
                  {"dim", blk.dim},
                  {"max_tokens", blk.max_tokens},
                  {"standardize", blk.standardize},
                  {"mean", blk.mean},
                  {"stdev", blk.stdev}};
        } else if constexpr (std::is_same_v<T, OneHotBlock>) {
          return {{"type", "onehot"},
                  {"class", std::string(to_string(blk.vocab.cls))},
                  {"kind", std::string(to_string(blk.vocab.kind))}};
        } else {
          return {{"type", "lexicon_count"}, {"lexicon", blk.lexicon}};
        }
      },
      b);
}

std::string vocab_filename(const Vocab& v) {
  return "vocab_" + std::string(to_string(v.cls)) + "_" + std::string(to_string(v.kind)) + ".json";
}

json svm_model_json(const SvmModel& m) {
  return {{"kind", "svm"},
          {"kernel", std::string(to_string(m.kernel))},
          {"gamma", m.gamma},
          {"C", m.C},
          {"weight_pos", m.weight_pos},
          {"weight_neg", m.weight_neg},
          {"support_vectors", m.support_vectors},
          {"dual_coef", m.dual_coef},
          {"bias", m.bias},
          {"linear_w", m.linear_w},
          {"converged", m.converged}};
}

json mlp_model_json(const MlpModel& m) {
  return {{"kind", "mlp"}, {"in_dim", m.in_dim}, {"hidden", m.hidden},
          {"W1", m.W1},    {"b1", m.b1},         {"W2", m.W2},
          {"b2", m.b2}};
}

json ngram_model_json(const NgramLinearModel& m) {
  return {{"kind", "ngram"},
          {"vocab", m.vocab},
          {"idf", m.idf},
          {"weights", m.weights},
          {"bias", m.bias}};
}

// Score files can cover ids the training corpus never saw, so the bundle
// records the path and reloads at open time (same policy as vector tables).
json external_model_json(const ExternalScores& m) {
  return {{"kind", "external"}, {"path", m.path}};
}

json classifier_json(const BinaryClassifier& clf) {
  if (const auto* svm = dynamic_cast<const SvmModel*>(&clf)) return svm_model_json(*svm);
  if (const auto* mlp = dynamic_cast<const MlpModel*>(&clf)) return mlp_model_json(*mlp);
  if (const auto* ng = dynamic_cast<const NgramLinearModel*>(&clf)) return ngram_model_json(*ng);
  if (const auto* ext = dynamic_cast<const ExternalScores*>(&clf)) return external_model_json(*ext);
  throw ConfigError("cannot serialize classifier of kind '" + std::string(clf.kind()) + "'");
}

void dump_to(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// ---- deserialization ----

template <typename T>
T get_field(const json& j, const char* key, const fs::path& file) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw DataError("corrupt model file " + file.string() + ": field '" + key + "': " + e.what());
  }
}

FeatureThresholds thresholds_from(const json& j, const fs::path& f) {
  FeatureThresholds t;
  t.hashtag_min_freq = get_field<std::size_t>(j, "hashtag_min_freq", f);
  t.mention_min_freq = get_field<std::size_t>(j, "mention_min_freq", f);
  t.emoji_min_freq = get_field<std::size_t>(j, "emoji_min_freq", f);
  t.word_min_freq = get_field<std::size_t>(j, "word_min_freq", f);
  t.max_tokens = get_field<std::size_t>(j, "max_tokens", f);
  t.standardize_embeddings = get_field<bool>(j, "standardize_embeddings", f);
  return t;
}

SvmConfig svm_config_from(const json& j, const fs::path& f) {
  SvmConfig c;
  const auto kernel = parse_kernel(get_field<std::string>(j, "kernel", f));
  if (!kernel) throw DataError("corrupt model file " + f.string() + ": unknown svm kernel");
  c.kernel = *kernel;
  c.C = get_field<double>(j, "C", f);
  c.tol = get_field<double>(j, "tol", f);
  c.max_passes = get_field<std::size_t>(j, "max_passes", f);
  const auto weighting = parse_weighting(get_field<std::string>(j, "weighting", f));
  if (!weighting) throw DataError("corrupt model file " + f.string() + ": unknown svm weighting");
  c.weighting = *weighting;
  if (j.contains("gamma") && !j["gamma"].is_null()) c.gamma = get_field<double>(j, "gamma", f);
  return c;
}

MlpConfig mlp_config_from(const json& j, const fs::path& f) {
  MlpConfig c;
  c.hidden = get_field<std::size_t>(j, "hidden", f);
  c.epochs = get_field<std::size_t>(j, "epochs", f);
  c.lr = get_field<double>(j, "lr", f);
  c.batch = get_field<std::size_t>(j, "batch", f);
  c.momentum = get_field<double>(j, "momentum", f);
  c.class_weight = get_field<bool>(j, "class_weight", f);
  return c;
}

NgramConfig ngram_config_from(const json& j, const fs::path& f) {
  NgramConfig c;
  c.epochs = get_field<std::size_t>(j, "epochs", f);
  c.lr = get_field<double>(j, "lr", f);
  c.l2 = get_field<double>(j, "l2", f);
  c.min_df = get_field<std::size_t>(j, "min_df", f);
  return c;
}

EnsembleConfig config_from(const json& j, const fs::path& f) {
  EnsembleConfig cfg;
  cfg.seed = get_field<std::uint64_t>(j, "seed", f);
  const auto fb = parse_fallback(get_field<std::string>(j, "fallback", f));
  if (!fb) throw DataError("corrupt model file " + f.string() + ": unknown fallback strategy");
  cfg.fallback = *fb;
  cfg.features = thresholds_from(j.at("features"), f);
  cfg.svm = svm_config_from(j.at("svm"), f);
  cfg.mlp = mlp_config_from(j.at("mlp"), f);
  cfg.ngram = ngram_config_from(j.at("ngram"), f);
  const json& backends = j.at("backends");
  try {
    cfg.level1 = BackendChoice::parse(backends.at("hostile").get<std::string>());
    for (Label d : kHostileLabels) {
      cfg.level2[static_cast<std::size_t>(d)] =
          BackendChoice::parse(backends.at(std::string(to_string(d))).get<std::string>());
    }
  } catch (const json::exception& e) {
    throw DataError("corrupt model file " + f.string() + ": backends: " + e.what());
  }
  return cfg;
}

Lexicon lexicon_from(const json& arr, const std::string& name, const fs::path& f) {
  Lexicon lex(name);
  if (!arr.is_array()) throw DataError("corrupt model file " + f.string() + ": " + name);
  for (const auto& t : arr) lex.insert(t.get<std::string>());
  return lex;
}

ModelResources resources_from(const json& j, const fs::path& f) {
  ModelResources res;
  res.stopwords = lexicon_from(j.at("stopwords"), "stopwords", f);
  if (!j.at("hate_lexicon").is_null()) {
    res.hate_lexicon = lexicon_from(j["hate_lexicon"], "hate", f);
  }
  if (!j.at("swear_lexicon").is_null()) {
    res.swear_lexicon = lexicon_from(j["swear_lexicon"], "swear", f);
  }
  const json& wv = j.at("word_vectors");
  if (!wv.is_null()) {
    const auto path = get_field<std::string>(wv, "path", f);
    const auto dim = get_field<std::size_t>(wv, "dim", f);
    res.word_vectors = load_word_vectors(path);
    res.word_vectors_path = path;
    if (res.word_vectors->dim() != dim) {
      throw DataError("word-vector file " + path + " has dimension " +
                      std::to_string(res.word_vectors->dim()) + ", bundle expects " +
                      std::to_string(dim));
    }
  }
  const json& sv = j.at("sample_vectors");
  if (!sv.is_null()) {
    const auto path = get_field<std::string>(sv, "path", f);
    const auto dim = get_field<std::size_t>(sv, "dim", f);
    res.sample_vectors = load_sample_vectors(path);
    res.sample_vectors_path = path;
    if (res.sample_vectors->dim() != dim) {
      throw DataError("sample-vector file " + path + " has dimension " +
                      std::to_string(res.sample_vectors->dim()) + ", bundle expects " +
                      std::to_string(dim));
    }
  }
  std::vector<std::pair<char32_t, char32_t>> ranges;
  for (const auto& r : j.at("emoji_ranges")) {
    if (!r.is_array() || r.size() != 2) {
      throw DataError("corrupt model file " + f.string() + ": emoji_ranges");
    }
    ranges.emplace_back(static_cast<char32_t>(r[0].get<std::uint32_t>()),
                        static_cast<char32_t>(r[1].get<std::uint32_t>()));
  }
  res.emoji = EmojiRanges::from_ranges(std::move(ranges));
  return res;
}

FeatureBlock block_from(const json& j, const fs::path& dir, const fs::path& f) {
  const auto type = get_field<std::string>(j, "type", f);
  if (type == "embedding") {
    EmbeddingBlock blk;
    const auto provider = parse_embedding_provider(get_field<std::string>(j, "provider", f));
    if (!provider) {
      throw DataError("corrupt model file " + f.string() + ": unknown embedding provider");
    }
    blk.provider = *provider;
    blk.dim = get_field<std::size_t>(j, "dim", f);
    blk.max_tokens = get_field<std::size_t>(j, "max_tokens", f);
    blk.standardize = get_field<bool>(j, "standardize", f);
    blk.mean = get_field<std::vector<double>>(j, "mean", f);
    blk.stdev = get_field<std::vector<double>>(j, "stdev", f);
    if (blk.standardize && !blk.mean.empty() &&
        (blk.mean.size() != blk.dim || blk.stdev.size() != blk.dim)) {
      throw DataError("corrupt model file " + f.string() + ": standardizer size mismatch");
    }
    return blk;
  }
  if (type == "onehot") {
    const auto cls = parse_label(get_field<std::string>(j, "class", f));
    const auto kind = parse_vocab_kind(get_field<std::string>(j, "kind", f));
    if (!cls || !kind) {
      throw DataError("corrupt model file " + f.string() + ": bad onehot block");
    }
    OneHotBlock blk;
    blk.vocab.cls = *cls;
    blk.vocab.kind = *kind;
    const fs::path vf = dir / vocab_filename(blk.vocab);
    const json vj = parse_file(vf);
    blk.vocab.min_freq = get_field<std::size_t>(vj, "min_freq", vf);
    blk.vocab.entries = get_field<std::vector<std::string>>(vj, "entries", vf);
    blk.vocab.rebuild_index();
    return blk;
  }
  if (type == "lexicon_count") {
    return LexiconCountBlock{get_field<std::string>(j, "lexicon", f)};
  }
  throw DataError("corrupt model file " + f.string() + ": unknown block type '" + type + "'");
}

std::unique_ptr<BinaryClassifier> classifier_from(const json& j, const fs::path& f) {
  const auto kind = get_field<std::string>(j, "kind", f);
  if (kind == "svm") {
    auto m = std::make_unique<SvmModel>();
    const auto kernel = parse_kernel(get_field<std::string>(j, "kernel", f));
    if (!kernel) throw DataError("corrupt model file " + f.string() + ": unknown kernel");
    m->kernel = *kernel;
    m->gamma = get_field<double>(j, "gamma", f);
    m->C = get_field<double>(j, "C", f);
    m->weight_pos = get_field<double>(j, "weight_pos", f);
    m->weight_neg = get_field<double>(j, "weight_neg", f);
    m->support_vectors = get_field<std::vector<std::vector<double>>>(j, "support_vectors", f);
    m->dual_coef = get_field<std::vector<double>>(j, "dual_coef", f);
    m->bias = get_field<double>(j, "bias", f);
    m->linear_w = get_field<std::vector<double>>(j, "linear_w", f);
    m->converged = get_field<bool>(j, "converged", f);
    if (m->dual_coef.size() != m->support_vectors.size()) {
      throw DataError("corrupt model file " + f.string() + ": dual_coef/support_vectors mismatch");
    }
    return m;
  }
  if (kind == "mlp") {
    auto m = std::make_unique<MlpModel>();
    m->in_dim = get_field<std::size_t>(j, "in_dim", f);
    m->hidden = get_field<std::size_t>(j, "hidden", f);
    m->W1 = get_field<std::vector<double>>(j, "W1", f);
    m->b1 = get_field<std::vector<double>>(j, "b1", f);
    m->W2 = get_field<std::vector<double>>(j, "W2", f);
    m->b2 = get_field<std::vector<double>>(j, "b2", f);
    if (m->W1.size() != m->hidden * m->in_dim || m->b1.size() != m->hidden ||
        m->W2.size() != 2 * m->hidden || m->b2.size() != 2) {
      throw DataError("corrupt model file " + f.string() + ": weight shape mismatch");
    }
    return m;
  }
  if (kind == "ngram") {
    auto m = std::make_unique<NgramLinearModel>();
    m->vocab = get_field<std::vector<std::string>>(j, "vocab", f);
    m->idf = get_field<std::vector<double>>(j, "idf", f);
    m->weights = get_field<std::vector<double>>(j, "weights", f);
    m->bias = get_field<double>(j, "bias", f);
    if (m->idf.size() != m->vocab.size() || m->weights.size() != m->vocab.size()) {
      throw DataError("corrupt model file " + f.string() + ": vocab/weights size mismatch");
    }
    m->rebuild_index();
    return m;
  }
  if (kind == "external") {
    return std::make_unique<ExternalScores>(
        load_external_scores(get_field<std::string>(j, "path", f)));
  }
  throw DataError("corrupt model file " + f.string() + ": unknown classifier kind '" + kind + "'");
}

std::string lp_combo_filename(const LabelSet& ls) {
  std::string key;
  for (Label l : ls.sorted()) {
    if (!key.empty()) key += '+';
    key += to_string(l);
  }
  return "clf_lp_" + key + ".json";
}

}  // namespace

void save_model(const Model& m, const std::string& dir, const std::string& run_config_json) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create model directory " + dir + ": " + ec.message());
  const fs::path root(dir);

  const EnsembleConfig& cfg = m.strategy == Strategy::binary_relevance ? m.br->config
                                                                       : m.lp->config;
  json manifest;
  manifest["format_version"] = kModelFormatVersion;
  manifest["strategy"] = std::string(to_string(m.strategy));
  manifest["config"] = config_json(cfg);
  if (!run_config_json.empty()) {
    try {
      manifest["run_config"] = json::parse(run_config_json);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("run_config is not valid JSON: ") + e.what());
    }
  }

  if (m.strategy == Strategy::binary_relevance) {
    const EnsembleModel& br = *m.br;
    manifest["resources"] = resources_json(br.resources);
    json slots;
    for (std::size_t slot = 0; slot < kSlotCount; ++slot) {
      const TrainedSlot& ts = br.slot(slot);
      json blocks = json::array();
      for (const FeatureBlock& b : ts.spec.blocks) {
        blocks.push_back(block_json(b));
        if (const auto* oh = std::get_if<OneHotBlock>(&b)) {
          dump_to(root / vocab_filename(oh->vocab),
                  json{{"class", std::string(to_string(oh->vocab.cls))},
                       {"kind", std::string(to_string(oh->vocab.kind))},
                       {"min_freq", oh->vocab.min_freq},
                       {"entries", oh->vocab.entries}});
        }
      }
      slots[std::string(slot_name(slot))] = {{"spec", blocks}};
      dump_to(root / ("clf_" + std::string(slot_name(slot)) + ".json"),
              classifier_json(*ts.clf));
    }
    manifest["slots"] = slots;
  } else {
    const LabelPowersetModel& lp = *m.lp;
    json combos = json::array();
    for (std::size_t k = 0; k < lp.combos.size(); ++k) {
      combos.push_back(lp.combos[k].to_string());
      dump_to(root / lp_combo_filename(lp.combos[k]), ngram_model_json(lp.scorers[k]));
    }
    manifest["combos"] = combos;
  }
  dump_to(root / "manifest.json", manifest);
}

Model load_model(const std::string& dir) {
  const fs::path root(dir);
  const fs::path mf = root / "manifest.json";
  const json manifest = parse_file(mf);

  const int version = get_field<int>(manifest, "format_version", mf);
  if (version != kModelFormatVersion) {
    throw DataError("unsupported model format version " + std::to_string(version) +
                    " (expected " + std::to_string(kModelFormatVersion) + "): " + mf.string());
  }
  const auto strategy = parse_strategy(get_field<std::string>(manifest, "strategy", mf));
  if (!strategy) throw DataError("corrupt model file " + mf.string() + ": unknown strategy");

  Model model;
  model.strategy = *strategy;
  if (manifest.contains("run_config")) {
    model.run_config = manifest["run_config"].dump(2) + "\n";
  }
  const EnsembleConfig cfg = config_from(manifest.at("config"), mf);

  if (*strategy == Strategy::binary_relevance) {
    EnsembleModel br;
    br.config = cfg;
    br.resources = resources_from(manifest.at("resources"), mf);
    const json& slots = manifest.at("slots");
    for (std::size_t slot = 0; slot < kSlotCount; ++slot) {
      const std::string name(slot_name(slot));
      if (!slots.contains(name)) {
        throw DataError("corrupt model file " + mf.string() + ": missing slot '" + name + "'");
      }
      TrainedSlot& ts = br.slot(slot);
      ts.backend = slot == 0 ? cfg.level1 : cfg.level2[slot - 1];
      for (const json& bj : slots[name].at("spec")) ts.spec.blocks.push_back(block_from(bj, root, mf));
      ts.clf = classifier_from(parse_file(root / ("clf_" + name + ".json")),
                               root / ("clf_" + name + ".json"));
    }
    model.br.emplace(std::move(br));
  } else {
    LabelPowersetModel lp;
    lp.config = cfg;
    for (const json& cj : manifest.at("combos")) {
      const LabelSet ls = parse_label_set(cj.get<std::string>(), "bundle combo");
      const fs::path cf = root / lp_combo_filename(ls);
      lp.combos.push_back(ls);
      auto clf = classifier_from(parse_file(cf), cf);
      auto* ng = dynamic_cast<NgramLinearModel*>(clf.get());
      if (!ng) throw DataError("corrupt model file " + cf.string() + ": expected an ngram model");
      lp.scorers.push_back(std::move(*ng));
    }
    model.lp.emplace(std::move(lp));
  }
  return model;
}

}  // namespace hostility

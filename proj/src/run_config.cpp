#include "hostility/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "hostility/errors.hpp"

namespace hostility {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& context, const std::string& what) {
  throw ConfigError(context + ": " + what);
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& context) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : known) {
      if (key == k) {
        ok = true;
        break;
      }
    }
    if (!ok) bad(context, "unknown key '" + key + "'");
  }
}

template <typename T>
void read_into(const json& obj, const char* key, T& out, const std::string& context) {
  if (!obj.contains(key)) return;
  try {
    out = obj[key].get<T>();
  } catch (const json::exception&) {
    bad(context, std::string("bad value for '") + key + "'");
  }
}

void read_paths(const json& obj, RunConfig::Paths& p, const std::string& context) {
  reject_unknown(obj,
                 {"train", "val", "test", "stopwords", "word_vectors", "sample_vectors",
                  "hate_lexicon", "swear_lexicon", "emoji_ranges"},
                 context);
  read_into(obj, "train", p.train, context);
  read_into(obj, "val", p.val, context);
  read_into(obj, "test", p.test, context);
  read_into(obj, "stopwords", p.stopwords, context);
  read_into(obj, "word_vectors", p.word_vectors, context);
  read_into(obj, "sample_vectors", p.sample_vectors, context);
  read_into(obj, "hate_lexicon", p.hate_lexicon, context);
  read_into(obj, "swear_lexicon", p.swear_lexicon, context);
  read_into(obj, "emoji_ranges", p.emoji_ranges, context);
}

void read_format(const json& obj, RunConfig& cfg, const std::string& context) {
  reject_unknown(obj, {"type", "id_column", "text_column", "labels_column"}, context);
  if (obj.contains("type")) {
    const auto type = obj["type"].is_string() ? obj["type"].get<std::string>() : std::string();
    if (type == "tsv") {
      cfg.format = FileFormat::tsv;
    } else if (type == "csv") {
      cfg.format = FileFormat::csv;
    } else {
      bad(context, "format.type must be \"tsv\" or \"csv\"");
    }
  }
  read_into(obj, "id_column", cfg.columns.id, context);
  read_into(obj, "text_column", cfg.columns.text, context);
  read_into(obj, "labels_column", cfg.columns.labels, context);
}

void read_backends(const json& obj, EnsembleConfig& ens, const std::string& context) {
  reject_unknown(obj, {"hostile", "fake", "hate", "offensive", "defamation"}, context);
  auto read_one = [&](const std::string& key, BackendChoice& out) {
    if (!obj.contains(key)) return;
    if (!obj[key].is_string()) bad(context, "backend '" + key + "' must be a string");
    out = BackendChoice::parse(obj[key].get<std::string>());
  };
  read_one("hostile", ens.level1);
  for (Label d : kHostileLabels) {
    read_one(std::string(to_string(d)), ens.level2[static_cast<std::size_t>(d)]);
  }
}

void read_features(const json& obj, FeatureThresholds& t, const std::string& context) {
  reject_unknown(obj,
                 {"hashtag_min_freq", "mention_min_freq", "emoji_min_freq", "word_min_freq",
                  "max_tokens", "standardize_embeddings"},
                 context);
  read_into(obj, "hashtag_min_freq", t.hashtag_min_freq, context);
  read_into(obj, "mention_min_freq", t.mention_min_freq, context);
  read_into(obj, "emoji_min_freq", t.emoji_min_freq, context);
  read_into(obj, "word_min_freq", t.word_min_freq, context);
  read_into(obj, "max_tokens", t.max_tokens, context);
  read_into(obj, "standardize_embeddings", t.standardize_embeddings, context);
}

void read_svm(const json& obj, SvmConfig& c, const std::string& context) {
  reject_unknown(obj, {"kernel", "C", "gamma", "tol", "max_passes", "weighting"}, context);
  if (obj.contains("kernel")) {
    const auto k = obj["kernel"].is_string() ? parse_kernel(obj["kernel"].get<std::string>())
                                             : std::nullopt;
    if (!k) bad(context, "svm.kernel must be \"linear\" or \"rbf\"");
    c.kernel = *k;
  }
  read_into(obj, "C", c.C, context);
  if (obj.contains("gamma")) {
    if (obj["gamma"].is_null()) {
      c.gamma.reset();
    } else if (obj["gamma"].is_number()) {
      c.gamma = obj["gamma"].get<double>();
    } else {
      bad(context, "svm.gamma must be a number or null");
    }
  }
  read_into(obj, "tol", c.tol, context);
  read_into(obj, "max_passes", c.max_passes, context);
  if (obj.contains("weighting")) {
    const auto w = obj["weighting"].is_string()
                       ? parse_weighting(obj["weighting"].get<std::string>())
                       : std::nullopt;
    if (!w) bad(context, "svm.weighting must be \"balanced\" or \"none\"");
    c.weighting = *w;
  }
}

void read_mlp(const json& obj, MlpConfig& c, const std::string& context) {
  reject_unknown(obj, {"hidden", "epochs", "lr", "batch", "momentum", "class_weight"}, context);
  read_into(obj, "hidden", c.hidden, context);
  read_into(obj, "epochs", c.epochs, context);
  read_into(obj, "lr", c.lr, context);
  read_into(obj, "batch", c.batch, context);
  read_into(obj, "momentum", c.momentum, context);
  read_into(obj, "class_weight", c.class_weight, context);
}

void read_ngram(const json& obj, NgramConfig& c, const std::string& context) {
  reject_unknown(obj, {"epochs", "lr", "l2", "min_df"}, context);
  read_into(obj, "epochs", c.epochs, context);
  read_into(obj, "lr", c.lr, context);
  read_into(obj, "l2", c.l2, context);
  read_into(obj, "min_df", c.min_df, context);
}

void read_eval(const json& obj, EvalScope& scope, const std::string& context) {
  reject_unknown(obj, {"scope"}, context);
  if (obj.contains("scope")) {
    const auto s = obj["scope"].is_string() ? parse_scope(obj["scope"].get<std::string>())
                                            : std::nullopt;
    if (!s) bad(context, "eval.scope must be \"end_to_end\" or \"second_level\"");
    scope = *s;
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const std::string& context) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    bad(context, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) bad(context, "top level must be a JSON object");
  reject_unknown(root,
                 {"seed", "strategy", "fallback", "jobs", "paths", "format", "backends",
                  "features", "svm", "mlp", "ngram", "eval"},
                 context);

  RunConfig cfg;
  read_into(root, "seed", cfg.ensemble.seed, context);
  if (root.contains("strategy")) {
    const auto s = root["strategy"].is_string()
                       ? parse_strategy(root["strategy"].get<std::string>())
                       : std::nullopt;
    if (!s) bad(context, "strategy must be \"binary_relevance\" or \"label_powerset\"");
    cfg.strategy = *s;
  }
  if (root.contains("fallback")) {
    const auto f = root["fallback"].is_string()
                       ? parse_fallback(root["fallback"].get<std::string>())
                       : std::nullopt;
    if (!f) bad(context, "fallback must be \"hate_offensive\" or \"max_prob\"");
    cfg.ensemble.fallback = *f;
  }
  read_into(root, "jobs", cfg.ensemble.jobs, context);
  if (root.contains("paths")) read_paths(root["paths"], cfg.paths, context + ": paths");
  if (root.contains("format")) read_format(root["format"], cfg, context + ": format");
  if (root.contains("backends")) {
    read_backends(root["backends"], cfg.ensemble, context + ": backends");
  }
  if (root.contains("features")) {
    read_features(root["features"], cfg.ensemble.features, context + ": features");
  }
  if (root.contains("svm")) read_svm(root["svm"], cfg.ensemble.svm, context + ": svm");
  if (root.contains("mlp")) read_mlp(root["mlp"], cfg.ensemble.mlp, context + ": mlp");
  if (root.contains("ngram")) read_ngram(root["ngram"], cfg.ensemble.ngram, context + ": ngram");
  if (root.contains("eval")) read_eval(root["eval"], cfg.scope, context + ": eval");
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path);
}

std::string run_config_json(const RunConfig& cfg) {
  const EnsembleConfig& e = cfg.ensemble;
  json backends;
  backends["hostile"] = e.level1.spec_string();
  for (Label d : kHostileLabels) {
    backends[std::string(to_string(d))] = e.level2[static_cast<std::size_t>(d)].spec_string();
  }
  // `jobs` is runtime scheduling, not semantics: leaving it out keeps the
  // canonical form (and so the config hash and the bundle) identical across
  // parallelism settings.
  json j = {
      {"seed", e.seed},
      {"strategy", std::string(to_string(cfg.strategy))},
      {"fallback", std::string(to_string(e.fallback))},
      {"paths",
       {{"train", cfg.paths.train},
        {"val", cfg.paths.val},
        {"test", cfg.paths.test},
        {"stopwords", cfg.paths.stopwords},
        {"word_vectors", cfg.paths.word_vectors},
        {"sample_vectors", cfg.paths.sample_vectors},
        {"hate_lexicon", cfg.paths.hate_lexicon},
        {"swear_lexicon", cfg.paths.swear_lexicon},
        {"emoji_ranges", cfg.paths.emoji_ranges}}},
      {"format",
       {{"type", cfg.format == FileFormat::tsv ? "tsv" : "csv"},
        {"id_column", cfg.columns.id},
        {"text_column", cfg.columns.text},
        {"labels_column", cfg.columns.labels}}},
      {"backends", backends},
      {"features",
       {{"hashtag_min_freq", e.features.hashtag_min_freq},
        {"mention_min_freq", e.features.mention_min_freq},
        {"emoji_min_freq", e.features.emoji_min_freq},
        {"word_min_freq", e.features.word_min_freq},
        {"max_tokens", e.features.max_tokens},
        {"standardize_embeddings", e.features.standardize_embeddings}}},
      {"svm",
       {{"kernel", std::string(to_string(e.svm.kernel))},
        {"C", e.svm.C},
        {"gamma", e.svm.gamma ? json(*e.svm.gamma) : json(nullptr)},
        {"tol", e.svm.tol},
        {"max_passes", e.svm.max_passes},
        {"weighting", std::string(to_string(e.svm.weighting))}}},
      {"mlp",
       {{"hidden", e.mlp.hidden},
        {"epochs", e.mlp.epochs},
        {"lr", e.mlp.lr},
        {"batch", e.mlp.batch},
        {"momentum", e.mlp.momentum},
        {"class_weight", e.mlp.class_weight}}},
      {"ngram",
       {{"epochs", e.ngram.epochs},
        {"lr", e.ngram.lr},
        {"l2", e.ngram.l2},
        {"min_df", e.ngram.min_df}}},
      {"eval", {{"scope", std::string(to_string(cfg.scope))}}},
  };
  return j.dump(2) + "\n";
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const RunConfig& cfg) { return fnv1a_hex(run_config_json(cfg)); }

}  // namespace hostility

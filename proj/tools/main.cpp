#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hostility/commands.hpp"
#include "hostility/errors.hpp"

namespace {

using namespace hostility;

RunConfig load_or_default(const std::string& config_path) {
  return config_path.empty() ? RunConfig{} : load_run_config(config_path);
}

void apply_backend_flag(RunConfig& cfg, const std::string& flag) {
  const auto eq = flag.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("bad --backend '" + flag + "' (expected <label>=<backend>)");
  }
  const std::string name = flag.substr(0, eq);
  const BackendChoice choice = BackendChoice::parse(flag.substr(eq + 1));
  if (name == "hostile") {
    cfg.ensemble.level1 = choice;
    return;
  }
  const auto label = parse_label(name);
  if (!label || *label == Label::non_hostile) {
    throw ConfigError("bad --backend '" + flag +
                      "' (label must be hostile, fake, hate, offensive, or defamation)");
  }
  cfg.ensemble.level2[static_cast<std::size_t>(*label)] = choice;
}

void write_file_or_die(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-level hostile-post detector for Devanagari Hindi"};
  app.require_subcommand(1);

  std::string config_path;
  std::string train_path, bundle_out = "model";
  std::string model_dir, input_path, pred_out;
  std::string gold_path, pred_path, report_out;
  std::string stats_input, stats_out;
  std::string fallback_str, scope_str, strategy_str;
  std::vector<std::string> backend_flags;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;

  auto* train = app.add_subcommand("train", "train classifiers and write a model bundle");
  train->add_option("--config", config_path, "run config JSON file");
  train->add_option("--train", train_path, "training corpus (overrides config)");
  auto* seed_opt = train->add_option("--seed", seed, "RNG seed (overrides config)");
  train->add_option("--out", bundle_out, "bundle directory (default: model)");
  train->add_option("--strategy", strategy_str, "binary_relevance | label_powerset");
  train->add_option("--fallback", fallback_str, "hate_offensive | max_prob");
  train->add_option("--backend", backend_flags,
                    "<label>=<svm|mlp|ngram|external:path>, repeatable");
  auto* jobs_opt = train->add_option("--jobs", jobs, "parallel classifier trainings");

  auto* predict = app.add_subcommand("predict", "label a corpus with a trained bundle");
  predict->add_option("--config", config_path, "run config JSON (for input format)");
  predict->add_option("--model", model_dir, "bundle directory")->required();
  predict->add_option("--input", input_path, "corpus to label")->required();
  predict->add_option("--out", pred_out, "predictions TSV")->required();

  auto* eval = app.add_subcommand("eval", "score predictions against gold labels");
  eval->add_option("--config", config_path, "run config JSON (for gold format)");
  eval->add_option("--gold", gold_path, "gold corpus")->required();
  eval->add_option("--pred", pred_path, "predictions TSV")->required();
  eval->add_option("--scope", scope_str, "end_to_end | second_level");
  eval->add_option("--out", report_out, "also write the JSON report here");

  auto* stats = app.add_subcommand("stats", "label distribution of a corpus");
  stats->add_option("--config", config_path, "run config JSON (for input format)");
  stats->add_option("--input", stats_input, "corpus file")->required();
  stats->add_option("--out", stats_out, "also write the JSON counts here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (train->parsed()) {
      RunConfig cfg = load_or_default(config_path);
      if (!train_path.empty()) cfg.paths.train = train_path;
      if (seed_opt->count()) cfg.ensemble.seed = seed;
      if (jobs_opt->count()) cfg.ensemble.jobs = jobs;
      if (!strategy_str.empty()) {
        const auto s = parse_strategy(strategy_str);
        if (!s) throw ConfigError("bad --strategy '" + strategy_str + "'");
        cfg.strategy = *s;
      }
      if (!fallback_str.empty()) {
        const auto f = parse_fallback(fallback_str);
        if (!f) throw ConfigError("bad --fallback '" + fallback_str + "'");
        cfg.ensemble.fallback = *f;
      }
      for (const std::string& flag : backend_flags) apply_backend_flag(cfg, flag);
      const TrainOutcome outcome = cmd_train(cfg, bundle_out);
      std::cout << outcome.summary_json;
    } else if (predict->parsed()) {
      const RunConfig cfg = load_or_default(config_path);
      const PredictOutcome outcome =
          cmd_predict(model_dir, input_path, pred_out, cfg.format, cfg.columns);
      for (const auto& [id, msg] : outcome.failures) {
        std::cerr << "post '" << id << "': " << msg << "\n";
      }
      std::cout << outcome.summary_json;
      if (!outcome.failures.empty()) return 2;
    } else if (eval->parsed()) {
      RunConfig cfg = load_or_default(config_path);
      if (!scope_str.empty()) {
        const auto s = parse_scope(scope_str);
        if (!s) throw ConfigError("bad --scope '" + scope_str + "'");
        cfg.scope = *s;
      }
      const EvalOutcome outcome =
          cmd_eval(gold_path, pred_path, cfg.scope, cfg.format, cfg.columns);
      std::cout << outcome.table;
      if (!report_out.empty()) write_file_or_die(report_out, outcome.report_json);
    } else if (stats->parsed()) {
      const RunConfig cfg = load_or_default(config_path);
      const StatsOutcome outcome = cmd_stats(stats_input, cfg.format, cfg.columns);
      std::cout << outcome.table;
      if (!stats_out.empty()) write_file_or_die(stats_out, outcome.stats_json);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const TrainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

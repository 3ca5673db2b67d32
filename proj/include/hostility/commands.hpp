#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hostility/corpus.hpp"
#include "hostility/metrics.hpp"
#include "hostility/run_config.hpp"

namespace hostility {

// Subcommand bodies. They throw the module errors (ConfigError, DataError,
// TrainError); main maps those to exit codes. Non-fatal warnings go to
// stderr as they happen.

// Loads every resource named in cfg.paths; unset paths stay absent.
ModelResources load_resources(const RunConfig& cfg);

struct TrainOutcome {
  std::string bundle_dir;
  std::string summary_json;  // the only place wall-clock time appears
};

// Trains per config and writes the bundle to out_dir. The bundle is
// byte-deterministic for a given config + corpus; the summary is not (it
// carries timings), which is why it is returned instead of stored.
TrainOutcome cmd_train(const RunConfig& cfg, const std::string& out_dir);

struct PredictOutcome {
  std::string summary_json;
  std::size_t fallback_count = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // (id, message)
};

// One output row per input row, order preserved. Also writes the summary to
// `<out_path>.summary.json` (deterministic, so eval can echo the fallback
// count from it). Per-post failures are collected, not fatal.
PredictOutcome cmd_predict(const std::string& bundle_dir, const std::string& input_path,
                           const std::string& out_path, FileFormat format,
                           const ColumnMapping& columns = {});

struct EvalOutcome {
  EvalReport report;
  std::string table;
  std::string report_json;
};

// Gold ids and prediction ids must match as sets; the error lists the
// missing side. Reads `<pred_path>.summary.json` for the fallback echo when
// the file is present.
EvalOutcome cmd_eval(const std::string& gold_path, const std::string& pred_path, EvalScope scope,
                     FileFormat format, const ColumnMapping& columns = {});

struct StatsOutcome {
  CorpusStats stats;
  std::string table;
  std::string stats_json;
};

StatsOutcome cmd_stats(const std::string& input_path, FileFormat format,
                       const ColumnMapping& columns = {});

}  // namespace hostility

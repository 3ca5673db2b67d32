#pragma once

#include <optional>
#include <string>

#include "hostility/ensemble.hpp"

namespace hostility {

inline constexpr int kModelFormatVersion = 1;

enum class Strategy { binary_relevance, label_powerset };

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view s);

// A trained model of either strategy, as persisted in a bundle directory.
struct Model {
  Strategy strategy = Strategy::binary_relevance;
  std::optional<EnsembleModel> br;
  std::optional<LabelPowersetModel> lp;
  std::string run_config;  // canonical JSON as stored; empty when absent
};

// Bundle layout: manifest.json (format version, strategy, config, resources,
// feature specs), vocab_<class>_<kind>.json per one-hot block, and one
// clf_<slot>.json per classifier (clf_hostile.json for the router,
// clf_lp_<combo>.json per powerset combination). Serialization is
// deterministic: sorted keys, shortest round-trip floats.
// `run_config_json`, when non-empty, is stored verbatim under "run_config".
void save_model(const Model& m, const std::string& dir,
                const std::string& run_config_json = {});

// Throws DataError on a missing/corrupt component or a format-version
// mismatch; the message names the offending file.
Model load_model(const std::string& dir);

}  // namespace hostility

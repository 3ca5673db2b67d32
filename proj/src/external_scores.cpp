#include "hostility/external_scores.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hostility/errors.hpp"

namespace hostility {

double ExternalScores::prob_for(const std::string& id) const {
  auto it = probs.find(id);
  if (it == probs.end()) {
    throw DataError("no external score for post '" + id + "' in " + path);
  }
  return it->second;
}

double ExternalScores::prob(const ClassifierInput& in) const {
  if (!in.post) throw ConfigError("external-scores backend needs the post id");
  return prob_for(in.post->id);
}

double ExternalScores::score(const ClassifierInput& in) const {
  const double p = std::clamp(prob(in), 1e-12, 1.0 - 1e-12);
  return std::log(p / (1.0 - p));
}

ExternalScores load_external_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open external-scores file: " + path);
  ExternalScores ext;
  ext.path = path;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected id<TAB>probability");
    }
    const std::string id = line.substr(0, tab);
    const std::string val = line.substr(tab + 1);
    double p = 0.0;
    try {
      std::size_t used = 0;
      p = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(lineno) + ": unparseable probability '" + val +
                      "'");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DataError(path + ":" + std::to_string(lineno) + ": probability " + val +
                      " outside [0, 1]");
    }
    if (!ext.probs.emplace(id, p).second) {
      throw DataError(path + ":" + std::to_string(lineno) + ": duplicate id '" + id + "'");
    }
  }
  if (ext.probs.empty()) throw DataError("external-scores file has no rows: " + path);
  return ext;
}

}  // namespace hostility

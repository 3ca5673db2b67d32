#include "hostility/ngram_linear.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hostility/errors.hpp"
#include "hostility/rng.hpp"
#include "hostility/utf8.hpp"

namespace hostility {

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

std::vector<std::string_view> ws_split(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ws(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_ws(text[i])) ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  return words;
}

// Sparse tf vector of a document restricted to the model vocabulary,
// L2-normalized after idf weighting.
std::vector<std::pair<std::size_t, double>> tfidf_vector(
    const std::unordered_map<std::string, double>& counts,
    const std::unordered_map<std::string, std::size_t>& index, const std::vector<double>& idf) {
  std::vector<std::pair<std::size_t, double>> vec;
  vec.reserve(counts.size());
  for (const auto& [key, tf] : counts) {
    auto it = index.find(key);
    if (it != index.end()) vec.emplace_back(it->second, tf * idf[it->second]);
  }
  double norm = 0.0;
  for (const auto& [k, v] : vec) norm += v * v;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (auto& [k, v] : vec) v /= norm;
  }
  std::sort(vec.begin(), vec.end());  // index order, deterministic accumulation
  return vec;
}

}  // namespace

std::unordered_map<std::string, double> ngram_counts(std::string_view text) {
  std::unordered_map<std::string, double> counts;
  const auto words = ws_split(text);
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string uni("w1:");
    uni += words[i];
    counts[uni] += 1.0;
    if (i + 1 < words.size()) {
      std::string key("w2:");
      key += words[i];
      key += ' ';
      key += words[i + 1];
      counts[key] += 1.0;
    }
  }
  const auto cps = utf8_decode(text);
  for (std::size_t n = 2; n <= 4; ++n) {
    if (cps.size() < n) break;
    const char prefix[3] = {'c', static_cast<char>('0' + n), ':'};
    for (std::size_t i = 0; i + n <= cps.size(); ++i) {
      std::string key(prefix, 3);
      const std::size_t begin = cps[i].offset;
      const std::size_t end = cps[i + n - 1].offset + cps[i + n - 1].length;
      key.append(text.substr(begin, end - begin));
      counts[key] += 1.0;
    }
  }
  return counts;
}

void NgramLinearModel::rebuild_index() {
  index_.clear();
  index_.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) index_.emplace(vocab[i], i);
}

double NgramLinearModel::score_text(std::string_view text) const {
  const auto vec = tfidf_vector(ngram_counts(text), index_, idf);
  double s = bias;
  for (const auto& [k, v] : vec) s += weights[k] * v;
  return s;
}

double NgramLinearModel::score(const ClassifierInput& in) const {
  if (!in.post) throw ConfigError("ngram backend needs the post text");
  return score_text(in.post->text);
}

NgramLinearModel train_ngram_linear(const std::vector<std::string>& texts,
                                    const std::vector<int>& y, const NgramConfig& cfg,
                                    std::uint64_t seed) {
  const std::size_t n = texts.size();
  if (n == 0 || y.size() != n) throw TrainError("ngram model needs a non-empty labeled corpus");
  const bool has0 = std::find(y.begin(), y.end(), 0) != y.end();
  const bool has1 = std::find_if(y.begin(), y.end(), [](int v) { return v != 0; }) != y.end();
  if (!has0 || !has1) throw TrainError("ngram model needs both classes present");

  std::unordered_map<std::string, std::size_t> df;
  std::vector<std::unordered_map<std::string, double>> doc_counts;
  doc_counts.reserve(n);
  for (const std::string& text : texts) {
    doc_counts.push_back(ngram_counts(text));
    for (const auto& [key, tf] : doc_counts.back()) ++df[key];
  }

  NgramLinearModel m;
  for (const auto& [key, count] : df) {
    if (count >= cfg.min_df) m.vocab.push_back(key);
  }
  if (m.vocab.empty()) throw TrainError("n-gram vocabulary is empty");
  std::sort(m.vocab.begin(), m.vocab.end());
  m.idf.resize(m.vocab.size());
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(m.vocab.size());
  for (std::size_t i = 0; i < m.vocab.size(); ++i) {
    m.idf[i] = std::log(static_cast<double>(n + 1) / static_cast<double>(df[m.vocab[i]] + 1)) + 1.0;
    index.emplace(m.vocab[i], i);
  }
  m.rebuild_index();

  std::vector<std::vector<std::pair<std::size_t, double>>> docs;
  docs.reserve(n);
  for (const auto& counts : doc_counts) docs.push_back(tfidf_vector(counts, index, m.idf));

  // L2-regularized logistic SGD with the scalar-scale trick: w = scale * wt.
  std::vector<double> wt(m.vocab.size(), 0.0);
  double scale = 1.0, bias = 0.0;
  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const auto& doc = docs[idx];
      double z = bias;
      for (const auto& [k, v] : doc) z += scale * wt[k] * v;
      const double g = 1.0 / (1.0 + std::exp(-z)) - (y[idx] ? 1.0 : 0.0);
      scale *= 1.0 - cfg.lr * cfg.l2;
      if (scale < 1e-9) {
        for (double& w : wt) w *= scale;
        scale = 1.0;
      }
      for (const auto& [k, v] : doc) wt[k] -= cfg.lr * g * v / scale;
      bias -= cfg.lr * g;
    }
  }
  m.weights.resize(wt.size());
  for (std::size_t k = 0; k < wt.size(); ++k) m.weights[k] = scale * wt[k];
  m.bias = bias;
  return m;
}

}  // namespace hostility

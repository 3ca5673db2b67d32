#include "hostility/resources.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hostility/errors.hpp"
#include "hostility/preprocess.hpp"

namespace hostility {

namespace {

void emit_warning(std::vector<std::string>* warnings, std::string msg) {
  if (warnings) {
    warnings->push_back(std::move(msg));
  } else {
    std::cerr << "warning: " << msg << "\n";
  }
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string f;
  while (ss >> f) fields.push_back(std::move(f));
  return fields;
}

double parse_value(const std::string& s, const std::string& path, std::size_t lineno) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError(path + ":" + std::to_string(lineno) + ": unparseable value '" + s + "'");
  }
}

bool is_uint(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string chomp(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::vector<std::string> Lexicon::sorted_tokens() const {
  std::vector<std::string> out(tokens_.begin(), tokens_.end());
  std::sort(out.begin(), out.end());
  return out;
}

EmbeddingTable load_word_vectors(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open word-vector file: " + path);
  EmbeddingTable table;
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    line = chomp(std::move(line));
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (first_content) {
      first_content = false;
      // word2vec text header: "count dim". A 2-field all-integer first line is
      // taken as the header; anything else is a data row and fixes the
      // dimension.
      if (fields.size() == 2 && is_uint(fields[0]) && is_uint(fields[1])) {
        dim = static_cast<std::size_t>(std::stoull(fields[1]));
        if (dim == 0) throw DataError(path + ":1: zero dimension in header");
        table = EmbeddingTable(dim);
        continue;
      }
    }
    if (fields.size() < 2) {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected token and values");
    }
    if (dim == 0) {
      dim = fields.size() - 1;
      table = EmbeddingTable(dim);
    } else if (fields.size() - 1 != dim) {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                      " values, got " + std::to_string(fields.size() - 1));
    }
    std::string key = normalize(fields[0]);
    if (key.empty()) key = fields[0];
    std::vector<double> vec(dim);
    for (std::size_t k = 0; k < dim; ++k) vec[k] = parse_value(fields[k + 1], path, lineno);
    if (!table.insert(std::move(key), std::move(vec))) {
      emit_warning(warnings, path + ":" + std::to_string(lineno) + ": duplicate token '" +
                                 fields[0] + "' overwrites earlier entry");
    }
  }
  if (table.size() == 0) throw DataError("word-vector file has no vectors: " + path);
  return table;
}

SampleVectorTable load_sample_vectors(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open sample-vector file: " + path);
  SampleVectorTable table;
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = chomp(std::move(line));
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected id<TAB>values");
    }
    std::string id = line.substr(0, tab);
    auto fields = split_ws(line.substr(tab + 1));
    if (id.empty() || fields.empty()) {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected id<TAB>values");
    }
    if (dim == 0) {
      dim = fields.size();
      table = SampleVectorTable(dim);
    } else if (fields.size() != dim) {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(dim) +
                      " values, got " + std::to_string(fields.size()));
    }
    std::vector<double> vec(dim);
    for (std::size_t k = 0; k < dim; ++k) vec[k] = parse_value(fields[k], path, lineno);
    if (!table.insert(id, std::move(vec))) {
      emit_warning(warnings, path + ":" + std::to_string(lineno) + ": duplicate id '" + id +
                                 "' overwrites earlier entry");
    }
  }
  if (table.size() == 0) throw DataError("sample-vector file has no vectors: " + path);
  return table;
}

Lexicon load_lexicon(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon file: " + path);
  Lexicon lex(name);
  std::string line;
  while (std::getline(in, line)) {
    line = chomp(std::move(line));
    if (line.empty() || line[0] == '#') continue;
    std::string tok = normalize(line);
    if (!tok.empty()) lex.insert(std::move(tok));
  }
  if (lex.empty()) throw DataError("lexicon '" + name + "' is empty: " + path);
  return lex;
}

Lexicon load_stopwords(const std::string& path) { return load_lexicon(path, "stopwords"); }

}  // namespace hostility

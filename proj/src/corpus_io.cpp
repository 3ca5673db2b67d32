#include "hostility/corpus_io.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_set>

#include "hostility/errors.hpp"

namespace hostility {

namespace {

void emit_warning(std::vector<std::string>* warnings, std::string msg) {
  if (warnings) {
    warnings->push_back(std::move(msg));
  } else {
    std::cerr << "warning: " << msg << "\n";
  }
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c += 0x20;
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

struct Record {
  std::vector<std::string> fields;
  std::size_t line;  // 1-based line the record starts on
};

std::vector<Record> read_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file: " + path);
  std::vector<Record> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Record rec;
    rec.line = lineno;
    std::size_t pos = 0;
    while (true) {
      const std::size_t tab = line.find('\t', pos);
      if (tab == std::string::npos) {
        rec.fields.push_back(line.substr(pos));
        break;
      }
      rec.fields.push_back(line.substr(pos, tab - pos));
      pos = tab + 1;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<Record> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  std::vector<Record> records;
  Record rec;
  rec.line = 1;
  std::string field;
  bool in_quotes = false;
  bool field_quoted = false;
  std::size_t lineno = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto end_field = [&] {
    rec.fields.push_back(std::move(field));
    field.clear();
    field_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    // skip records that are a single empty field (blank lines)
    if (!(rec.fields.size() == 1 && rec.fields[0].empty())) records.push_back(std::move(rec));
    rec = Record{};
    rec.line = lineno;
  };
  while (i < n) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < n && text[i + 1] == '"') {
          field.push_back('"');
          i += 2;
        } else {
          in_quotes = false;
          ++i;
        }
      } else {
        if (c == '\n') ++lineno;
        field.push_back(c);
        ++i;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_quoted) {
          throw DataError(path + ":" + std::to_string(lineno) + ": malformed quoting");
        }
        in_quotes = true;
        field_quoted = true;
        ++i;
        break;
      case ',':
        end_field();
        ++i;
        break;
      case '\r':
        if (i + 1 < n && text[i + 1] == '\n') ++i;
        [[fallthrough]];
      case '\n':
        ++i;
        ++lineno;
        end_record();
        break;
      default:
        if (field_quoted) {
          throw DataError(path + ":" + std::to_string(lineno) + ": malformed quoting");
        }
        field.push_back(c);
        ++i;
        break;
    }
  }
  if (in_quotes) {
    throw DataError(path + ":" + std::to_string(lineno) + ": unterminated quoted field");
  }
  if (!field.empty() || field_quoted || !rec.fields.empty()) end_record();
  return records;
}

std::size_t find_column(const std::vector<std::string>& header, const std::string& configured,
                        const std::vector<std::string>& aliases, const std::string& role,
                        const std::string& path) {
  if (!configured.empty()) {
    const std::string want = ascii_lower(trim(configured));
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (ascii_lower(trim(header[k])) == want) return k;
    }
    throw DataError(path + ": header has no column '" + configured + "' (for " + role + ")");
  }
  for (const std::string& alias : aliases) {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (ascii_lower(trim(header[k])) == alias) return k;
    }
  }
  std::string names;
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (k) names += ", ";
    names += trim(header[k]);
  }
  throw DataError(path + ": cannot find a " + role + " column in header [" + names + "]");
}

}  // namespace

Corpus load_corpus(const std::string& path, FileFormat format, const ColumnMapping& columns,
                   std::vector<std::string>* warnings) {
  const std::vector<Record> records = format == FileFormat::tsv ? read_tsv(path) : read_csv(path);
  if (records.empty()) throw DataError(path + ": empty file (header row required)");

  const std::vector<std::string>& header = records[0].fields;
  const std::size_t id_col =
      find_column(header, columns.id, {"id", "post_id", "unique_id"}, "post-id", path);
  const std::size_t text_col =
      find_column(header, columns.text, {"text", "post", "tweet"}, "text", path);
  std::size_t labels_col = header.size();  // sentinel: no labels column
  try {
    labels_col =
        find_column(header, columns.labels, {"labels", "label", "labels_set"}, "labels", path);
  } catch (const DataError&) {
    if (!columns.labels.empty()) throw;
    emit_warning(warnings, path + ": no labels column; loading all rows unlabeled");
  }

  Corpus corpus;
  corpus.posts.reserve(records.size() - 1);
  std::unordered_set<std::string> seen_ids;
  std::size_t labeled = 0, unlabeled = 0;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const Record& rec = records[r];
    auto field_at = [&](std::size_t col) -> std::string {
      return col < rec.fields.size() ? rec.fields[col] : std::string();
    };
    Post post;
    post.id = trim(field_at(id_col));
    if (post.id.empty()) {
      throw DataError(path + ":" + std::to_string(rec.line) + ": empty post id");
    }
    if (!seen_ids.insert(post.id).second) {
      throw DataError(path + ":" + std::to_string(rec.line) + ": duplicate id '" + post.id + "'");
    }
    post.text = field_at(text_col);
    const std::string tags = labels_col < header.size() ? trim(field_at(labels_col)) : std::string();
    if (tags.empty()) {
      ++unlabeled;
    } else {
      post.labels = parse_label_set(tags, "post '" + post.id + "'");
      ++labeled;
    }
    corpus.posts.push_back(std::move(post));
  }
  if (labeled > 0 && unlabeled > 0) {
    emit_warning(warnings, path + ": mixes labeled and unlabeled rows (" +
                               std::to_string(labeled) + " labeled, " + std::to_string(unlabeled) +
                               " unlabeled)");
  }
  return corpus;
}

void write_corpus(const Corpus& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write dataset file: " + path);
  out << "id\ttext\tlabels\n";
  for (const Post& p : c.posts) {
    if (p.text.find('\t') != std::string::npos || p.text.find('\n') != std::string::npos) {
      throw DataError("post '" + p.id + "': text contains tab/newline, not representable in TSV");
    }
    out << p.id << '\t' << p.text << '\t';
    if (p.labels) out << p.labels->to_string(/*file_spelling=*/true);
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

void write_predictions(const std::vector<Prediction>& preds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write predictions file: " + path);
  for (const Prediction& p : preds) {
    out << p.id << '\t' << p.labels.to_string(/*file_spelling=*/true) << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

std::vector<Prediction> load_predictions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open predictions file: " + path);
  std::vector<Prediction> preds;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected id<TAB>labels");
    }
    Prediction p;
    p.id = trim(line.substr(0, tab));
    const std::string tags = trim(line.substr(tab + 1));
    if (lineno == 1 && ascii_lower(p.id) == "id" &&
        (ascii_lower(tags) == "labels" || ascii_lower(tags) == "label")) {
      continue;  // tolerated header
    }
    if (p.id.empty() || tags.empty()) {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected id<TAB>labels");
    }
    if (!seen_ids.insert(p.id).second) {
      throw DataError(path + ":" + std::to_string(lineno) + ": duplicate id '" + p.id + "'");
    }
    p.labels = parse_label_set(tags, "prediction '" + p.id + "'");
    preds.push_back(std::move(p));
  }
  return preds;
}

}  // namespace hostility

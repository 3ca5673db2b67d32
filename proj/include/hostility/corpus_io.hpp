#pragma once

#include <string>
#include <vector>

#include "hostility/corpus.hpp"

namespace hostility {

enum class FileFormat { tsv, csv };

// Header column names. Empty means "match a known alias": id/post_id/unique_id,
// text/post/tweet, labels/label/labels_set (case-insensitive either way).
struct ColumnMapping {
  std::string id;
  std::string text;
  std::string labels;
};

// Reads a dataset file. Header row required; rows may leave the labels column
// empty (unlabeled prediction input). `warnings` collects non-fatal findings
// (mixed labeled/unlabeled rows, missing labels column); null sends them to
// stderr. Throws DataError on unknown tags, label-invariant violations,
// duplicate ids, or malformed CSV quoting.
Corpus load_corpus(const std::string& path, FileFormat format, const ColumnMapping& columns = {},
                   std::vector<std::string>* warnings = nullptr);

// Canonical TSV: header `id\ttext\tlabels`, non_hostile written as
// "non-hostile". Throws DataError if a text contains a tab or newline (not
// representable in TSV).
void write_corpus(const Corpus& c, const std::string& path);

struct Prediction {
  std::string id;
  LabelSet labels;
};

// Prediction rows: `id\tcomma-separated-labels`, no header (a leading
// "id<TAB>labels" line is tolerated and skipped on read).
void write_predictions(const std::vector<Prediction>& preds, const std::string& path);
std::vector<Prediction> load_predictions(const std::string& path);

}  // namespace hostility

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hostility/label.hpp"

namespace hostility {

enum class Split { train, val, test, unspecified };

std::string_view to_string(Split s);

// One social-media post. `text` is kept byte-exact as read from the file;
// normalization happens downstream. `labels` is absent for unlabeled
// prediction input.
struct Post {
  std::string id;
  std::string text;
  std::optional<LabelSet> labels;
};

struct Corpus {
  std::vector<Post> posts;
  Split split = Split::unspecified;

  std::size_t size() const { return posts.size(); }
};

// Table-1-style counts.
struct CorpusStats {
  std::array<std::size_t, 4> per_label = {};  // indexed by hostile label enum value
  std::size_t total_hostile = 0;
  std::size_t non_hostile = 0;
  std::size_t total = 0;

  std::size_t count(Label l) const {
    return l == Label::non_hostile ? non_hostile : per_label[static_cast<std::size_t>(l)];
  }
};

// Throws DataError if any post is unlabeled.
CorpusStats corpus_stats(const Corpus& c);

}  // namespace hostility

#include "hostility/corpus.hpp"

#include "hostility/errors.hpp"

namespace hostility {

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
    case Split::unspecified: return "unspecified";
  }
  return "?";
}

CorpusStats corpus_stats(const Corpus& c) {
  CorpusStats stats;
  for (const Post& p : c.posts) {
    if (!p.labels) {
      throw DataError("corpus_stats: unlabeled post '" + p.id + "'");
    }
    p.labels->validate();
    if (p.labels->contains(Label::non_hostile)) {
      ++stats.non_hostile;
    } else {
      ++stats.total_hostile;
      for (Label l : kHostileLabels) {
        if (p.labels->contains(l)) ++stats.per_label[static_cast<std::size_t>(l)];
      }
    }
  }
  stats.total = stats.total_hostile + stats.non_hostile;
  return stats;
}

}  // namespace hostility

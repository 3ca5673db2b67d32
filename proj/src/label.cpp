#include "hostility/label.hpp"

#include "hostility/errors.hpp"

namespace hostility {

std::string_view to_string(Label l) {
  switch (l) {
    case Label::fake: return "fake";
    case Label::hate: return "hate";
    case Label::offensive: return "offensive";
    case Label::defamation: return "defamation";
    case Label::non_hostile: return "non_hostile";
  }
  return "?";
}

std::string_view file_tag(Label l) {
  return l == Label::non_hostile ? "non-hostile" : to_string(l);
}

std::optional<Label> parse_label(std::string_view tag) {
  for (Label l : kAllLabels) {
    if (tag == to_string(l) || tag == file_tag(l)) return l;
  }
  return std::nullopt;
}

std::size_t LabelSet::size() const {
  std::size_t n = 0;
  for (Label l : kAllLabels) {
    if (contains(l)) ++n;
  }
  return n;
}

void LabelSet::validate() const {
  if (empty()) throw DataError("empty label set");
  if (contains(Label::non_hostile) && size() > 1) {
    throw DataError("exclusive label violated: non-hostile combined with a hostile tag");
  }
}

std::vector<Label> LabelSet::sorted() const {
  std::vector<Label> out;
  for (Label l : kAllLabels) {
    if (contains(l)) out.push_back(l);
  }
  return out;
}

std::string LabelSet::to_string(bool file_spelling) const {
  std::string out;
  for (Label l : sorted()) {
    if (!out.empty()) out.push_back(',');
    out += file_spelling ? file_tag(l) : hostility::to_string(l);
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

LabelSet parse_label_set(std::string_view tags, std::string_view context) {
  LabelSet set;
  std::size_t start = 0;
  while (start <= tags.size()) {
    std::size_t end = tags.find(',', start);
    if (end == std::string_view::npos) end = tags.size();
    const std::string_view tag = trim(tags.substr(start, end - start));
    if (!tag.empty()) {
      const auto l = parse_label(tag);
      if (!l) {
        throw DataError(std::string(context) + ": unknown label tag '" + std::string(tag) + "'");
      }
      set.insert(*l);
    }
    if (end == tags.size()) break;
    start = end + 1;
  }
  try {
    set.validate();
  } catch (const DataError& e) {
    throw DataError(std::string(context) + ": " + e.what());
  }
  return set;
}

}  // namespace hostility

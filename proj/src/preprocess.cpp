#include "hostility/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>

#include "hostility/errors.hpp"
#include "hostility/utf8.hpp"

namespace hostility {

namespace {

bool is_space_cp(char32_t cp) {
  switch (cp) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
    case 0x20: case 0x85: case 0xA0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Punctuation stripped from token edges. Category P* over the blocks this
// data actually contains; '#' and '@' are deliberately absent (entity
// extraction owns them).
bool is_strippable_punct(char32_t cp) {
  if (cp < 0x80) {
    switch (cp) {
      case '!': case '"': case '%': case '&': case '\'': case '(': case ')':
      case '*': case ',': case '-': case '.': case '/': case ':': case ';':
      case '?': case '[': case '\\': case ']': case '_': case '{': case '}':
        return true;
      default:
        return false;
    }
  }
  switch (cp) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
    case 0x964: case 0x965: case 0x970:  // danda, double danda, abbreviation sign
    case 0x30FB:
      return true;
    default:
      break;
  }
  if (cp >= 0x2010 && cp <= 0x2027) return true;
  if (cp >= 0x2030 && cp <= 0x205E) return true;
  if (cp >= 0x3001 && cp <= 0x3003) return true;
  if (cp >= 0x3008 && cp <= 0x3011) return true;
  if (cp >= 0x3014 && cp <= 0x301F) return true;
  if (cp == 0xFF03 || cp == 0xFF20) return false;  // fullwidth # and @
  if (cp >= 0xFF01 && cp <= 0xFF0F) return true;
  if (cp >= 0xFF1A && cp <= 0xFF20) return true;
  if (cp >= 0xFF3B && cp <= 0xFF40) return true;
  if (cp >= 0xFF5B && cp <= 0xFF65) return true;
  return false;
}

char32_t latin_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  return cp;
}

// Canonical composition pairs for the scripts in this data. Devanagari
// letters 0958..095F are composition exclusions: they decompose and never
// re-compose, while 0929/0931/0934 do compose from base + nukta.
struct ComposePair {
  std::uint64_t key;  // (base << 21) | mark
  char32_t composed;
};

constexpr std::uint64_t ckey(char32_t base, char32_t mark) {
  return (std::uint64_t(base) << 21) | mark;
}

constexpr std::array<ComposePair, 48> kComposeTable = {{
    {ckey(0x41, 0x300), 0xC0}, {ckey(0x41, 0x301), 0xC1}, {ckey(0x41, 0x302), 0xC2},
    {ckey(0x41, 0x303), 0xC3}, {ckey(0x41, 0x308), 0xC4}, {ckey(0x41, 0x30A), 0xC5},
    {ckey(0x43, 0x327), 0xC7}, {ckey(0x45, 0x300), 0xC8}, {ckey(0x45, 0x301), 0xC9},
    {ckey(0x45, 0x302), 0xCA}, {ckey(0x45, 0x308), 0xCB}, {ckey(0x49, 0x300), 0xCC},
    {ckey(0x49, 0x301), 0xCD}, {ckey(0x49, 0x302), 0xCE}, {ckey(0x49, 0x308), 0xCF},
    {ckey(0x4E, 0x303), 0xD1}, {ckey(0x4F, 0x300), 0xD2}, {ckey(0x4F, 0x301), 0xD3},
    {ckey(0x4F, 0x302), 0xD4}, {ckey(0x4F, 0x303), 0xD5}, {ckey(0x4F, 0x308), 0xD6},
    {ckey(0x55, 0x300), 0xD9}, {ckey(0x55, 0x301), 0xDA}, {ckey(0x55, 0x302), 0xDB},
    {ckey(0x55, 0x308), 0xDC}, {ckey(0x59, 0x301), 0xDD}, {ckey(0x61, 0x300), 0xE0},
    {ckey(0x61, 0x301), 0xE1}, {ckey(0x61, 0x302), 0xE2}, {ckey(0x61, 0x303), 0xE3},
    {ckey(0x61, 0x308), 0xE4}, {ckey(0x61, 0x30A), 0xE5}, {ckey(0x63, 0x327), 0xE7},
    {ckey(0x65, 0x300), 0xE8}, {ckey(0x65, 0x301), 0xE9}, {ckey(0x65, 0x302), 0xEA},
    {ckey(0x65, 0x308), 0xEB}, {ckey(0x69, 0x300), 0xEC}, {ckey(0x69, 0x301), 0xED},
    {ckey(0x69, 0x302), 0xEE}, {ckey(0x69, 0x308), 0xEF}, {ckey(0x6E, 0x303), 0xF1},
    {ckey(0x75, 0x300), 0xF9}, {ckey(0x75, 0x301), 0xFA}, {ckey(0x75, 0x302), 0xFB},
    {ckey(0x75, 0x308), 0xFC}, {ckey(0x928, 0x93C), 0x929}, {ckey(0x930, 0x93C), 0x931},
}};

char32_t compose(char32_t base, char32_t mark) {
  if (base == 0x933 && mark == 0x93C) return 0x934;
  if (base == 0x6F && mark == 0x300) return 0xF2;
  if (base == 0x6F && mark == 0x301) return 0xF3;
  if (base == 0x6F && mark == 0x302) return 0xF4;
  if (base == 0x6F && mark == 0x303) return 0xF5;
  if (base == 0x6F && mark == 0x308) return 0xF6;
  if (base == 0x79 && mark == 0x301) return 0xFD;
  if (base == 0x79 && mark == 0x308) return 0xFF;
  const std::uint64_t key = ckey(base, mark);
  auto it = std::lower_bound(kComposeTable.begin(), kComposeTable.end(), key,
                             [](const ComposePair& p, std::uint64_t k) { return p.key < k; });
  if (it != kComposeTable.end() && it->key == key) return it->composed;
  return 0;
}

// Devanagari nukta letters excluded from composition.
char32_t nukta_decomposition_base(char32_t cp) {
  switch (cp) {
    case 0x958: return 0x915;
    case 0x959: return 0x916;
    case 0x95A: return 0x917;
    case 0x95B: return 0x91C;
    case 0x95C: return 0x921;
    case 0x95D: return 0x922;
    case 0x95E: return 0x92B;
    case 0x95F: return 0x92F;
    default: return 0;
  }
}

bool is_word_char(char32_t cp) {
  if (cp == '_') return true;
  if (cp >= '0' && cp <= '9') return true;
  if (cp >= 'a' && cp <= 'z') return true;
  if (cp >= 'A' && cp <= 'Z') return true;
  return cp >= 0x900 && cp <= 0x97F;  // Devanagari letters, matras, digits
}

bool ascii_iprefix(std::string_view text, std::size_t at, std::string_view prefix) {
  if (at + prefix.size() > text.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    char c = text[at + k];
    if (c >= 'A' && c <= 'Z') c += 0x20;
    if (c != prefix[k]) return false;
  }
  return true;
}

// Longest-first so ":-)" wins over ":)".
constexpr std::array<std::string_view, 9> kSmileys = {
    ":-)", ":-(", "<3", ":)", ":(", ":D", ";)", ":P", ":/"};

enum class EntType { hashtag, mention, url, emoji, smiley };

struct FoundEntity {
  EntType type;
  std::size_t begin;  // byte offsets
  std::size_t end;
};

std::vector<FoundEntity> scan_entities(std::string_view text, const EmojiRanges& emoji) {
  const auto cps = utf8_decode(text);
  std::vector<FoundEntity> found;
  const std::size_t n = cps.size();
  std::size_t i = 0;
  while (i < n) {
    const char32_t cp = cps[i].value;
    // URLs first so "://" never feeds the smiley matcher.
    if (cp == 'h' || cp == 'H' || cp == 'w' || cp == 'W') {
      const std::size_t at = cps[i].offset;
      if (ascii_iprefix(text, at, "http://") || ascii_iprefix(text, at, "https://") ||
          ascii_iprefix(text, at, "www.")) {
        std::size_t j = i;
        while (j < n && !is_space_cp(cps[j].value)) ++j;
        found.push_back({EntType::url, at, cps[j - 1].offset + cps[j - 1].length});
        i = j;
        continue;
      }
    }
    if ((cp == '#' || cp == '@') && i + 1 < n && is_word_char(cps[i + 1].value)) {
      std::size_t j = i + 1;
      while (j < n && is_word_char(cps[j].value)) ++j;
      found.push_back({cp == '#' ? EntType::hashtag : EntType::mention, cps[i].offset,
                       cps[j - 1].offset + cps[j - 1].length});
      i = j;
      continue;
    }
    if (cp != 0x200D && emoji.contains(cp)) {
      std::size_t j = i + 1;
      if (cp >= 0x1F1E6 && cp <= 0x1F1FF && j < n && cps[j].value >= 0x1F1E6 &&
          cps[j].value <= 0x1F1FF) {
        ++j;  // regional-indicator pair = one flag
      } else {
        while (j < n) {
          const char32_t v = cps[j].value;
          if (v == 0xFE0F || (v >= 0x1F3FB && v <= 0x1F3FF)) {
            ++j;
          } else if (v == 0x200D && j + 1 < n && cps[j + 1].value != 0x200D &&
                     emoji.contains(cps[j + 1].value)) {
            j += 2;
          } else {
            break;
          }
        }
      }
      found.push_back({EntType::emoji, cps[i].offset, cps[j - 1].offset + cps[j - 1].length});
      i = j;
      continue;
    }
    {
      const std::size_t at = cps[i].offset;
      bool matched = false;
      for (std::string_view sm : kSmileys) {
        if (text.substr(at, sm.size()) == sm) {
          const std::size_t end = at + sm.size();
          found.push_back({EntType::smiley, at, end});
          while (i < n && cps[i].offset < end) ++i;
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    ++i;
  }
  return found;
}

}  // namespace

const EmojiRanges& EmojiRanges::defaults() {
  static const EmojiRanges r = EmojiRanges::from_ranges(
      {{0x1F300, 0x1FAFF}, {0x2600, 0x27BF}, {0xFE0F, 0xFE0F}});
  return r;
}

EmojiRanges EmojiRanges::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open emoji range file: " + path);
  std::vector<std::pair<char32_t, char32_t>> ranges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t s = line.find_first_not_of(" \t");
    if (s == std::string::npos || line[s] == '#') continue;
    const std::string body = line.substr(s, line.find_last_not_of(" \t") - s + 1);
    const std::size_t dash = body.find('-');
    try {
      char32_t lo, hi;
      if (dash == std::string::npos) {
        lo = hi = static_cast<char32_t>(std::stoul(body, nullptr, 16));
      } else {
        lo = static_cast<char32_t>(std::stoul(body.substr(0, dash), nullptr, 16));
        hi = static_cast<char32_t>(std::stoul(body.substr(dash + 1), nullptr, 16));
      }
      if (hi < lo) throw DataError("");
      ranges.emplace_back(lo, hi);
    } catch (const std::exception&) {
      throw DataError(path + ":" + std::to_string(lineno) + ": bad emoji range '" + body + "'");
    }
  }
  if (ranges.empty()) throw DataError("emoji range file has no ranges: " + path);
  return EmojiRanges::from_ranges(std::move(ranges));
}

std::string normalize(std::string_view token) {
  const auto raw = utf8_decode(token);
  std::vector<char32_t> seq;
  seq.reserve(raw.size() + 4);
  for (const auto& c : raw) {
    if (const char32_t base = nukta_decomposition_base(c.value)) {
      seq.push_back(base);
      seq.push_back(0x93C);
    } else {
      seq.push_back(c.value);
    }
  }
  std::vector<char32_t> comp;
  comp.reserve(seq.size());
  for (char32_t cp : seq) {
    if (!comp.empty()) {
      if (const char32_t c = compose(comp.back(), cp)) {
        comp.back() = c;
        continue;
      }
    }
    comp.push_back(cp);
  }
  for (char32_t& cp : comp) cp = latin_lower(cp);
  std::size_t b = 0, e = comp.size();
  while (b < e && is_strippable_punct(comp[b])) ++b;
  while (e > b && is_strippable_punct(comp[e - 1])) --e;
  std::string out;
  for (std::size_t i = b; i < e; ++i) utf8_append(comp[i], out);
  return out;
}

SocialEntities extract_entities(std::string_view text, const EmojiRanges& emoji) {
  SocialEntities ents;
  for (const FoundEntity& f : scan_entities(text, emoji)) {
    std::string s(text.substr(f.begin, f.end - f.begin));
    switch (f.type) {
      case EntType::hashtag: ents.hashtags.push_back(std::move(s)); break;
      case EntType::mention: ents.mentions.push_back(std::move(s)); break;
      case EntType::url: ents.urls.push_back(std::move(s)); break;
      case EntType::emoji: ents.emojis.push_back(std::move(s)); break;
      case EntType::smiley: ents.smileys.push_back(std::move(s)); break;
    }
  }
  return ents;
}

namespace {

std::string remove_spans(std::string_view text, const std::vector<FoundEntity>& spans) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  for (const FoundEntity& f : spans) {
    out.append(text.substr(pos, f.begin - pos));
    out.push_back(' ');
    pos = f.end;
  }
  out.append(text.substr(pos));
  return out;
}

std::vector<std::string> tokenize_normalized(std::string_view text) {
  std::vector<std::string> tokens;
  const auto cps = utf8_decode(text);
  std::size_t i = 0;
  const std::size_t n = cps.size();
  while (i < n) {
    while (i < n && is_space_cp(cps[i].value)) ++i;
    if (i >= n) break;
    const std::size_t start = cps[i].offset;
    while (i < n && !is_space_cp(cps[i].value)) ++i;
    const std::size_t end = i < n ? cps[i].offset : text.size();
    std::string tok = normalize(text.substr(start, end - start));
    if (!tok.empty()) tokens.push_back(std::move(tok));
  }
  return tokens;
}

}  // namespace

std::string remove_entities(std::string_view text, const EmojiRanges& emoji) {
  return remove_spans(text, scan_entities(text, emoji));
}

std::vector<std::string> tokenize(std::string_view text) { return tokenize_normalized(text); }

CleanedText clean(std::string_view text, const Lexicon& stopwords, const EmojiRanges& emoji) {
  CleanedText out;
  out.raw_tokens = tokenize_normalized(remove_entities(text, emoji));
  out.tokens.reserve(out.raw_tokens.size());
  for (const std::string& t : out.raw_tokens) {
    if (!stopwords.contains(t)) out.tokens.push_back(t);
  }
  return out;
}

PreparedPost prepare(const Post& post, const Lexicon& stopwords, const EmojiRanges& emoji) {
  PreparedPost pp;
  pp.post = &post;
  const auto spans = scan_entities(post.text, emoji);
  for (const FoundEntity& f : spans) {
    std::string s(post.text.substr(f.begin, f.end - f.begin));
    switch (f.type) {
      case EntType::hashtag: pp.entities.hashtags.push_back(std::move(s)); break;
      case EntType::mention: pp.entities.mentions.push_back(std::move(s)); break;
      case EntType::url: pp.entities.urls.push_back(std::move(s)); break;
      case EntType::emoji: pp.entities.emojis.push_back(std::move(s)); break;
      case EntType::smiley: pp.entities.smileys.push_back(std::move(s)); break;
    }
  }
  const std::string residual = remove_spans(post.text, spans);
  pp.cleaned.raw_tokens = tokenize_normalized(residual);
  pp.cleaned.tokens.reserve(pp.cleaned.raw_tokens.size());
  for (const std::string& t : pp.cleaned.raw_tokens) {
    if (!stopwords.contains(t)) pp.cleaned.tokens.push_back(t);
  }
  return pp;
}

}  // namespace hostility

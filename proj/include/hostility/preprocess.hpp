#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hostility/corpus.hpp"
#include "hostility/resources.hpp"

namespace hostility {

// Social-media entities pulled out of a post, in left-to-right order and with
// their source form preserved ('#'/'@' sigils kept, case untouched).
struct SocialEntities {
  std::vector<std::string> hashtags;
  std::vector<std::string> mentions;
  std::vector<std::string> urls;
  std::vector<std::string> emojis;   // one extended cluster per entry
  std::vector<std::string> smileys;  // ASCII emoticons from the fixed list
};

struct CleanedText {
  std::vector<std::string> tokens;      // after stopword removal
  std::vector<std::string> raw_tokens;  // before stopword removal
};

// Codepoint ranges treated as emoji bases. ZWJ-joined sequences, variation
// selectors, and regional-indicator pairs are clustered structurally on top.
class EmojiRanges {
 public:
  static const EmojiRanges& defaults();

  // Config file: one hex range per line ("1F300-1FAFF" or "FE0F"),
  // '#' comments.
  static EmojiRanges load(const std::string& path);

  static EmojiRanges from_ranges(std::vector<std::pair<char32_t, char32_t>> ranges) {
    EmojiRanges r;
    r.ranges_ = std::move(ranges);
    return r;
  }

  bool contains(char32_t cp) const {
    for (const auto& [lo, hi] : ranges_) {
      if (cp >= lo && cp <= hi) return true;
    }
    return false;
  }

  const std::vector<std::pair<char32_t, char32_t>>& ranges() const { return ranges_; }

 private:
  std::vector<std::pair<char32_t, char32_t>> ranges_;
};

// Unicode NFC (covering the scripts in this data: Devanagari and Latin),
// Latin letters lowercased, Devanagari otherwise untouched, surrounding
// punctuation stripped. '#' and '@' are left alone; entity extraction owns
// them. An empty result is allowed; callers drop it.
std::string normalize(std::string_view token);

SocialEntities extract_entities(std::string_view text,
                                const EmojiRanges& emoji = EmojiRanges::defaults());

// The text with every extracted entity span replaced by a space.
std::string remove_entities(std::string_view text,
                            const EmojiRanges& emoji = EmojiRanges::defaults());

// Whitespace split + normalize(), empty pieces dropped.
std::vector<std::string> tokenize(std::string_view text);

// Entity removal, then tokenize, then stopword filter.
CleanedText clean(std::string_view text, const Lexicon& stopwords,
                  const EmojiRanges& emoji = EmojiRanges::defaults());

// A post with both representations the pipeline needs: raw text stays on the
// Post, entities and cleaned tokens are computed once here.
struct PreparedPost {
  const Post* post = nullptr;
  SocialEntities entities;
  CleanedText cleaned;
};

PreparedPost prepare(const Post& post, const Lexicon& stopwords,
                     const EmojiRanges& emoji = EmojiRanges::defaults());

}  // namespace hostility

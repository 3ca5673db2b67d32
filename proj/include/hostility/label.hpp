#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hostility {

// The five task labels. Enum order is the canonical order used everywhere
// for deterministic iteration and tie-breaking.
enum class Label : std::uint8_t {
  fake = 0,
  hate = 1,
  offensive = 2,
  defamation = 3,
  non_hostile = 4,
};

inline constexpr std::array<Label, 5> kAllLabels = {
    Label::fake, Label::hate, Label::offensive, Label::defamation, Label::non_hostile};

inline constexpr std::array<Label, 4> kHostileLabels = {
    Label::fake, Label::hate, Label::offensive, Label::defamation};

// Canonical lowercase name ("non_hostile").
std::string_view to_string(Label l);

// Spelling used in dataset files ("non-hostile").
std::string_view file_tag(Label l);

// Accepts both the canonical and the file spelling. Empty optional on unknown.
std::optional<Label> parse_label(std::string_view tag);

// Set of labels attached to one post. Invariants (checked by validate()):
// non-empty, and non_hostile never co-occurs with a hostile label.
class LabelSet {
 public:
  LabelSet() = default;

  static LabelSet single(Label l) {
    LabelSet s;
    s.insert(l);
    return s;
  }

  void insert(Label l) { bits_ |= mask(l); }
  void erase(Label l) { bits_ &= ~mask(l); }
  bool contains(Label l) const { return (bits_ & mask(l)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;

  // True when the set marks a hostile post. Meaningful only for valid sets.
  bool hostile() const { return !contains(Label::non_hostile); }

  // Throws DataError if empty or if non_hostile is mixed with hostile labels.
  void validate() const;

  // Members in canonical order.
  std::vector<Label> sorted() const;

  // Comma-joined member names in canonical order. file_spelling selects the
  // dataset-file tag for non_hostile.
  std::string to_string(bool file_spelling = false) const;

  std::uint8_t bits() const { return bits_; }

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  static std::uint8_t mask(Label l) { return std::uint8_t(1u << static_cast<unsigned>(l)); }
  std::uint8_t bits_ = 0;
};

// Parses a comma-separated tag list ("fake,hate"). Throws DataError on an
// unknown tag or an invariant violation; `context` prefixes the message.
LabelSet parse_label_set(std::string_view tags, std::string_view context);

}  // namespace hostility

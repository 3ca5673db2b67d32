#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hostility {

// Decoded codepoint plus the byte offset it starts at in the source string.
struct Codepoint {
  char32_t value;
  std::size_t offset;
  std::size_t length;  // bytes
};

// Lenient decoder: invalid sequences come back as U+FFFD, one byte at a time.
std::vector<Codepoint> utf8_decode(std::string_view s);

void utf8_append(char32_t cp, std::string& out);
std::string utf8_encode(const std::vector<char32_t>& cps);

}  // namespace hostility

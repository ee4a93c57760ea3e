#pragma once

// Internal ASCII-level text helpers shared by the lexicon matcher and the
// gazetteer. Bytes >= 0x80 (UTF-8 lead/continuation) count as word
// characters so multi-byte words are never split at a boundary.

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>

namespace aida::detail {

inline bool is_word_char(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string ascii_lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](char c) { return ascii_lower(c); });
  return out;
}

// RFC 3986 percent-encoding; everything outside the unreserved set is
// escaped, including '/'.
inline std::string percent_encode(std::string_view s) {
  static const char hex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(c);
    } else {
      out.push_back('%');
      out.push_back(hex[u >> 4]);
      out.push_back(hex[u & 0xf]);
    }
  }
  return out;
}

}  // namespace aida::detail

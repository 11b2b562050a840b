#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace derivcheck::utf8 {

// Number of code points. Continuation bytes (10xxxxxx) are not counted.
inline std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

// Byte offset of code point `index`; s.size() when index == length(s).
inline std::size_t byte_offset(std::string_view s, std::size_t index) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) {
      if (seen == index) return i;
      ++seen;
    }
  }
  return s.size();
}

inline std::string substr(std::string_view s, std::size_t start, std::size_t end) {
  const std::size_t b = byte_offset(s, start);
  const std::size_t e = byte_offset(s, end);
  return std::string(s.substr(b, e - b));
}

}  // namespace derivcheck::utf8

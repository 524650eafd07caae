#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace bergman {

/// 64-bit FNV-1a over the bytes of `text`, rendered as 16 lowercase hex digits.
inline std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bergman

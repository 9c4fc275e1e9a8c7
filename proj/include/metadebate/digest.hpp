#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace metadebate {

// FNV-1a, 64-bit. Used for cache keys, dataset digests, and criteria-domain
// digests. Stable across platforms and processes, which std::hash is not.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL) {
  std::uint64_t hash = seed;
  for (unsigned char byte : data) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline std::string hex64(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

inline std::string digest_hex(std::string_view data) { return hex64(fnv1a64(data)); }

}  // namespace metadebate

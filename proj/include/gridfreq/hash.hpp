#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gridfreq {

/// 64-bit FNV-1a over bytes; used for content-addressed run ids.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t value);

}  // namespace gridfreq

#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace citeintent {

// FNV-1a, used for content fingerprints in manifests and model state hashes.
inline constexpr std::uint64_t kFnvOffset = 14695981039346656037ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline std::uint64_t fnv1a(std::string_view data, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a_u64(std::uint64_t value, std::uint64_t h = kFnvOffset) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xffu;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a_double(double value, std::uint64_t h = kFnvOffset) {
  std::uint64_t bits = 0;
  std::memcpy(&bits, &value, sizeof(bits));
  return fnv1a_u64(bits, h);
}

std::string hash_hex(std::uint64_t h);

}  // namespace citeintent

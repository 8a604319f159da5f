#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace cello {

/// 64-bit FNV-1a over bytes; used to derive per-record seeds from ids.
inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// SplitMix64 finalizer; mixes two seeds into one.
inline uint64_t mix(uint64_t a, uint64_t b) {
  uint64_t z = a + 0x9e3779b97f4a7c15ull * (b | 1ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Deterministic RNG with identical output on every platform.
/// std::mt19937 would be portable but the std distributions are not,
/// so draws are done by hand (rejection sampling for bounded values).
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, bound); bound must be nonzero.
  uint64_t below(uint64_t bound) {
    if (bound == 0) fail(ErrorKind::EmptyInput, "rng bound must be nonzero");
    // Rejection sampling over the largest multiple of bound.
    uint64_t limit = bound * (UINT64_MAX / bound);
    uint64_t v = next();
    while (v >= limit) v = next();
    return v % bound;
  }

  size_t index(size_t size) { return static_cast<size_t>(below(size)); }

  bool coin() { return (next() & 1ull) != 0; }

  /// Fisher-Yates; stable given the same seed and element order.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    if (items.size() < 2) return;
    for (size_t i = items.size() - 1; i > 0; --i) {
      size_t j = index(i + 1);
      std::swap(items[i], items[j]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    if (items.empty()) fail(ErrorKind::EmptyInput, "rng pick from empty list");
    return items[index(items.size())];
  }

 private:
  uint64_t state_;
};

}  // namespace cello

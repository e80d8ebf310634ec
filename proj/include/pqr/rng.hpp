#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "pqr/util.hpp"

namespace pqr {

/// splitmix64 finalizer; good avalanche for seed derivation.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t base, std::string_view tag) {
  return mix64(base ^ fnv1a(tag));
}

inline uint64_t derive_seed(uint64_t base, uint64_t salt) { return mix64(base ^ mix64(salt)); }

/// mt19937_64 with hand-rolled draw helpers. The standard distributions are
/// implementation-defined, so all sampling goes through these to keep outputs
/// bit-stable across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next() { return eng_(); }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n must be > 0.
  size_t below(size_t n) {
    // Lemire's multiply-shift rejection method.
    uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<uint64_t>(m);
    if (lo < n) {
      uint64_t threshold = (0 - static_cast<uint64_t>(n)) % n;
      while (lo < threshold) {
        x = next();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<uint64_t>(m);
      }
    }
    return static_cast<size_t>(m >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace pqr

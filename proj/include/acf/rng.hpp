// Usable under the terms in the Apache License, Version 2.0.
#pragma once

#include <cstdint>
#include <random>

#include "acf/element.hpp"
#include "acf/errors.hpp"

namespace acf {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from (base, lane).
inline uint64_t mix_seed(uint64_t base, uint64_t lane) {
  return splitmix64(splitmix64(base) ^ (lane * 0x9e3779b97f4a7c15ULL + 1));
}

// Seeded stream wrapper. All draws go through hand-rolled reductions instead
// of std distributions so the same seed yields the same stream on every
// standard library.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, bound). Lemire multiply-shift reduction.
  uint64_t below(uint64_t bound) {
    if (bound == 0) throw contract_error("Rng::below: bound must be positive");
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  // Uniform double in [0, 1).
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  Element random_key() { return key_from_u64(next_u64()); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace acf

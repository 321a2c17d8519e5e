// Usable under the terms in the Apache License, Version 2.0.
#pragma once

#include <cstddef>
#include <cstdint>

namespace acf {

// Geometry and targets for one filter instance: k tables of N bins of b slots
// holding f-bit fingerprints, sized for n elements at load 1/gamma.
struct FilterParams {
  size_t n = 0;           // capacity in elements
  uint32_t k = 0;         // hash tables
  uint32_t b = 0;         // slots per bin
  double gamma = 0.0;     // total slots = gamma * n, gamma > 1
  uint32_t N = 0;         // bins per table
  uint32_t f = 0;         // fingerprint bits
  uint32_t s = 0;         // hash selector bits (cyclic only)
  uint32_t max_kicks = 0; // eviction chain limit
  double epsilon_target = 0.0;  // bk / (gamma * 2^f)

  void validate() const;  // throws std::invalid_argument
};

// N = ceil(gamma*n/(b*k)), epsilon_target = bk/(gamma*2^f),
// max_kicks = max(500, 8*ceil(log2(N*k))).
FilterParams derive_params(size_t n, uint32_t k, uint32_t b, double gamma,
                           uint32_t f, uint32_t s = 0);

// occupancy in (0,1) converts to gamma = 1/occupancy.
double gamma_from_occupancy(double occupancy);

}  // namespace acf

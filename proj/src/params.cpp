// Usable under the terms in the Apache License, Version 2.0.
#include "acf/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace acf {

void FilterParams::validate() const {
  if (n < 1) throw std::invalid_argument("params: capacity n must be >= 1");
  if (k < 2) throw std::invalid_argument("params: need k >= 2 hash tables");
  if (b < 1) throw std::invalid_argument("params: need b >= 1 slots per bin");
  if (f < 1 || f > 16) throw std::invalid_argument("params: fingerprint bits must be in [1,16]");
  if (s > 8) throw std::invalid_argument("params: selector bits must be <= 8");
  if (!(gamma > 1.0)) throw std::invalid_argument("params: gamma must exceed 1");
  if (N < 1) throw std::invalid_argument("params: N must be >= 1");
  if (static_cast<double>(N) * b * k < gamma * static_cast<double>(n) - 1e-9)
    throw std::invalid_argument("params: N*b*k must cover gamma*n slots");
}

FilterParams derive_params(size_t n, uint32_t k, uint32_t b, double gamma,
                           uint32_t f, uint32_t s) {
  FilterParams p;
  p.n = n;
  p.k = k;
  p.b = b;
  p.gamma = gamma;
  p.f = f;
  p.s = s;
  if (n < 1) throw std::invalid_argument("derive_params: n must be >= 1");
  if (!(gamma > 1.0)) throw std::invalid_argument("derive_params: gamma must exceed 1");
  if (k < 2 || b < 1) throw std::invalid_argument("derive_params: need k >= 2 and b >= 1");
  p.N = static_cast<uint32_t>(
      std::ceil(gamma * static_cast<double>(n) / (static_cast<double>(b) * k) - 1e-9));
  if (p.N < 1) p.N = 1;
  p.epsilon_target =
      static_cast<double>(b) * k / (gamma * std::ldexp(1.0, static_cast<int>(f)));
  const double total_cells = static_cast<double>(p.N) * k;
  p.max_kicks = std::max<uint32_t>(
      500, 8 * static_cast<uint32_t>(std::ceil(std::log2(std::max(2.0, total_cells)))));
  p.validate();
  return p;
}

double gamma_from_occupancy(double occupancy) {
  if (!(occupancy > 0.0) || !(occupancy < 1.0))
    throw std::invalid_argument("occupancy must lie strictly inside (0,1)");
  return 1.0 / occupancy;
}

}  // namespace acf

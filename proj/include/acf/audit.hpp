// Usable under the terms in the Apache License, Version 2.0.
//
// Invariant fuzz suites. A fuzz run interleaves inserts, queries and fixes
// on one filter and checks, after every operation, that every stored
// element still answers present; the full grid/dictionary audit runs
// periodically. The suffix fuzz drives an instrumented cuckooing filter and
// checks the path suffix property on every non-looping record.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acf/filter.hpp"

namespace acf {
namespace audit {

struct FuzzConfig {
  Variant variant = Variant::cuckooing;
  size_t n = 120;
  uint32_t k = 2;
  uint32_t b = 1;
  uint32_t f = 5;
  uint32_t s = 0;
  double gamma = 1.25;
  uint64_t seed = 1;
  size_t ops = 10000;
  size_t grid_audit_every = 500;
};

struct FuzzStats {
  size_t ops = 0;
  size_t inserts = 0;
  size_t queries = 0;
  size_t fixes = 0;
  size_t rebuilds = 0;
  size_t violations = 0;
  std::vector<std::string> failures;

  void merge(const FuzzStats& other);
};

// Mixed-op fuzz with a per-op no-false-negative sweep. Violations are
// collected, not thrown.
FuzzStats run_fuzz(const FuzzConfig& cfg);

// A fuzz config per variant, sized so the four together cost total_ops.
std::vector<FuzzConfig> variant_roster(uint64_t seed, size_t total_ops);

struct SuffixFuzzConfig {
  size_t n = 1u << 12;
  uint32_t f = 2;  // coarse fingerprints make false positives plentiful
  uint64_t seed = 1;
  size_t target_paths = 100000;
};

struct SuffixFuzzStats {
  size_t paths = 0;
  size_t looped = 0;
  size_t violations = 0;
  size_t queries = 0;
};

SuffixFuzzStats run_suffix_fuzz(const SuffixFuzzConfig& cfg);

}  // namespace audit
}  // namespace acf

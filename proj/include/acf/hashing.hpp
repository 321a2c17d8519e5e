// Usable under the terms in the Apache License, Version 2.0.
//
// Seeded location and fingerprint hash families. A family carries one 64-bit
// seed per hash table plus a fingerprint seed; fingerprint variants (the
// selector dimension used by the cyclic and swapping filters) get derived
// per-index seeds so the variants behave as independent keyed functions.
#pragma once

#include <cstdint>
#include <vector>

#include "acf/element.hpp"
#include "acf/rng.hpp"

namespace acf {

// MurmurHash2 64A with an explicit seed.
uint64_t hash_bytes(const void* data, size_t len, uint64_t seed);

class HashFamily {
 public:
  HashFamily() = default;  // empty family; obtain a usable one via draw()

  // k location hashes onto [0, num_bins); fingerprints onto [0, 2^fingerprint_bits)
  // for selector indices in [0, selector_domain).
  static HashFamily draw(uint32_t k, uint32_t num_bins, uint32_t fingerprint_bits,
                         uint32_t selector_domain, Rng& rng);

  uint32_t location(uint32_t table, const Element& x) const;
  uint16_t fingerprint(const Element& x, uint32_t index) const;

  // Fresh seeds from the stream; this family is left untouched.
  HashFamily reseeded(Rng& rng) const;

  uint32_t table_count() const { return static_cast<uint32_t>(location_seeds_.size()); }
  uint32_t num_bins() const { return num_bins_; }
  uint32_t fingerprint_bits() const { return fingerprint_bits_; }
  uint32_t selector_domain() const { return selector_domain_; }
  const std::vector<uint64_t>& location_seeds() const { return location_seeds_; }
  uint64_t fingerprint_seed() const { return fingerprint_seed_; }

 private:
  std::vector<uint64_t> location_seeds_;
  uint64_t fingerprint_seed_ = 0;
  std::vector<uint64_t> fingerprint_index_seeds_;
  uint32_t num_bins_ = 0;
  uint32_t fingerprint_bits_ = 0;
  uint32_t selector_domain_ = 1;
};

}  // namespace acf

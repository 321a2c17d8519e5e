// Usable under the terms in the Apache License, Version 2.0.
#include "acf/hashing.hpp"

#include <cstring>

#include "acf/errors.hpp"

namespace acf {

uint64_t hash_bytes(const void* data, size_t len, uint64_t seed) {
  const uint64_t m = 0xc6a4a7935bd1e995ULL;
  const int r = 47;
  uint64_t h = seed ^ (len * m);

  const auto* p = static_cast<const unsigned char*>(data);
  const unsigned char* end = p + (len & ~size_t{7});
  while (p != end) {
    uint64_t k;
    std::memcpy(&k, p, 8);
    p += 8;
    k *= m;
    k ^= k >> r;
    k *= m;
    h ^= k;
    h *= m;
  }

  const size_t tail = len & 7;
  if (tail != 0) {
    uint64_t k = 0;
    std::memcpy(&k, p, tail);
    h ^= k;
    h *= m;
  }

  h ^= h >> r;
  h *= m;
  h ^= h >> r;
  return h;
}

HashFamily HashFamily::draw(uint32_t k, uint32_t num_bins, uint32_t fingerprint_bits,
                            uint32_t selector_domain, Rng& rng) {
  if (k < 1 || num_bins < 1 || fingerprint_bits < 1 || fingerprint_bits > 16 ||
      selector_domain < 1) {
    throw std::invalid_argument("HashFamily::draw: bad parameters");
  }
  HashFamily fam;
  fam.num_bins_ = num_bins;
  fam.fingerprint_bits_ = fingerprint_bits;
  fam.selector_domain_ = selector_domain;
  fam.location_seeds_.resize(k);
  for (auto& s : fam.location_seeds_) s = rng.next_u64();
  fam.fingerprint_seed_ = rng.next_u64();
  fam.fingerprint_index_seeds_.resize(selector_domain);
  for (uint32_t i = 0; i < selector_domain; ++i) {
    fam.fingerprint_index_seeds_[i] =
        splitmix64(fam.fingerprint_seed_ ^ (0x9e3779b97f4a7c15ULL * (i + 1)));
  }
  return fam;
}

uint32_t HashFamily::location(uint32_t table, const Element& x) const {
  if (table >= location_seeds_.size())
    throw contract_error("location_hash: table index out of range");
  const uint64_t h = hash_bytes(x.data(), x.size(), location_seeds_[table]);
  // Multiply-shift keeps the range exact for bin counts that are not powers
  // of two (occupancy stays exact).
  return static_cast<uint32_t>((static_cast<unsigned __int128>(h) * num_bins_) >> 64);
}

uint16_t HashFamily::fingerprint(const Element& x, uint32_t index) const {
  if (index >= selector_domain_)
    throw contract_error("fingerprint_hash: variant index out of domain");
  const uint64_t h = hash_bytes(x.data(), x.size(), fingerprint_index_seeds_[index]);
  return static_cast<uint16_t>(h >> (64 - fingerprint_bits_));
}

HashFamily HashFamily::reseeded(Rng& rng) const {
  return draw(table_count(), num_bins_, fingerprint_bits_, selector_domain_, rng);
}

}  // namespace acf

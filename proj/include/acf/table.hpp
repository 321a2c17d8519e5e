// Usable under the terms in the Apache License, Version 2.0.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "acf/errors.hpp"

namespace acf {

struct Location {
  uint32_t table = 0;
  uint32_t bin = 0;
  uint32_t slot = 0;

  friend bool operator==(const Location&, const Location&) = default;
};

struct Slot {
  uint16_t fingerprint = 0;
  uint8_t selector = 0;
  uint8_t occupied = 0;
};

// The k x N x b slot grid. Fingerprint/selector of an unoccupied slot are
// meaningless and never read.
class TableSet {
 public:
  TableSet() = default;
  TableSet(uint32_t k, uint32_t N, uint32_t b)
      : k_(k), N_(N), b_(b), slots_(static_cast<size_t>(k) * N * b) {}

  uint32_t tables() const { return k_; }
  uint32_t bins() const { return N_; }
  uint32_t slots_per_bin() const { return b_; }
  size_t total_slots() const { return slots_.size(); }
  size_t occupancy_count() const { return occupancy_count_; }

  uint64_t flat(const Location& loc) const {
    return (static_cast<uint64_t>(loc.table) * N_ + loc.bin) * b_ + loc.slot;
  }

  const Slot& at(const Location& loc) const { return slots_[checked_flat(loc)]; }

  std::optional<uint32_t> first_empty_slot(uint32_t table, uint32_t bin) const {
    const size_t base = (static_cast<size_t>(table) * N_ + bin) * b_;
    for (uint32_t s = 0; s < b_; ++s)
      if (!slots_[base + s].occupied) return s;
    return std::nullopt;
  }

  void place(const Location& loc, uint16_t fingerprint, uint8_t selector) {
    Slot& s = slots_[checked_flat(loc)];
    if (s.occupied) throw consistency_error("TableSet::place: slot already occupied");
    s = Slot{fingerprint, selector, 1};
    ++occupancy_count_;
  }

  void clear(const Location& loc) {
    Slot& s = slots_[checked_flat(loc)];
    if (!s.occupied) throw consistency_error("TableSet::clear: slot already empty");
    s = Slot{};
    --occupancy_count_;
  }

  // Rewrite fingerprint/selector in place (cyclic fix); occupancy untouched.
  void rewrite(const Location& loc, uint16_t fingerprint, uint8_t selector) {
    Slot& s = slots_[checked_flat(loc)];
    if (!s.occupied) throw consistency_error("TableSet::rewrite: slot is empty");
    s.fingerprint = fingerprint;
    s.selector = selector;
  }

  void clear_all() {
    std::fill(slots_.begin(), slots_.end(), Slot{});
    occupancy_count_ = 0;
  }

 private:
  size_t checked_flat(const Location& loc) const {
    if (loc.table >= k_ || loc.bin >= N_ || loc.slot >= b_)
      throw contract_error("TableSet: location out of range");
    return static_cast<size_t>(flat(loc));
  }

  uint32_t k_ = 0, N_ = 0, b_ = 0;
  std::vector<Slot> slots_;
  size_t occupancy_count_ = 0;
};

}  // namespace acf

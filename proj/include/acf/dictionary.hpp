// Usable under the terms in the Apache License, Version 2.0.
//
// Exact storage of the stored set with bidirectional element <-> location
// maps. Stands in for the remote store that makes rehash-on-fix possible;
// access_counter tracks reverse lookups so experiments can report them.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>

#include "acf/element.hpp"
#include "acf/errors.hpp"
#include "acf/table.hpp"

namespace acf {

class ReverseDictionary {
 public:
  ReverseDictionary() = default;
  ReverseDictionary(uint32_t k, uint32_t N, uint32_t b) : N_(N), b_(b), k_(k) {}

  void store(const Element& x, const Location& loc);

  // Reverse lookup; increments the access counter.
  const Element& element_at(const Location& loc);

  // Reverse lookup for audits and instrumentation; not counted.
  const Element& peek_at(const Location& loc) const;

  void relocate(const Location& from, const Location& to);

  // Drops the entry at loc (the element goes "in hand" during a chain).
  Element remove_at(const Location& loc);

  bool contains(const Element& x) const { return element_to_location_.count(x) > 0; }
  std::optional<Location> lookup(const Element& x) const;

  size_t size() const { return element_to_location_.size(); }
  uint64_t access_count() const { return access_count_; }

  void clear() {
    element_to_location_.clear();
    location_to_element_.clear();
  }

  // Deterministic iteration: entries ordered by flat location index.
  void for_each_sorted(const std::function<void(const Location&, const Element&)>& fn) const;

  const std::unordered_map<Element, Location>& forward_map() const {
    return element_to_location_;
  }

 private:
  uint64_t flat(const Location& loc) const {
    return (static_cast<uint64_t>(loc.table) * N_ + loc.bin) * b_ + loc.slot;
  }
  Location unflat(uint64_t idx) const {
    return Location{static_cast<uint32_t>(idx / (static_cast<uint64_t>(N_) * b_)),
                    static_cast<uint32_t>((idx / b_) % N_),
                    static_cast<uint32_t>(idx % b_)};
  }

  uint32_t N_ = 1, b_ = 1, k_ = 1;
  std::unordered_map<Element, Location> element_to_location_;
  std::unordered_map<uint64_t, Element> location_to_element_;
  uint64_t access_count_ = 0;
};

}  // namespace acf

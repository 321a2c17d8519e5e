// Usable under the terms in the Apache License, Version 2.0.
//
// Adaptive cuckoo filters. Four variants share the grid, insert and query
// machinery and differ in how a false positive is fixed:
//   vanilla   - nothing ever changes on a false positive
//   cuckooing - each colliding element advances to table beta+1 (mod k),
//               displacing occupants onward round-robin
//   cyclic    - the colliding slot's hash-selector bits advance and the
//               stored fingerprint is recomputed; nothing moves
//   swapping  - the colliding element trades places with a random other slot
//               of its bin; fingerprints depend on the slot index
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "acf/dictionary.hpp"
#include "acf/hashing.hpp"
#include "acf/params.hpp"
#include "acf/rng.hpp"
#include "acf/table.hpp"

namespace acf {

enum class Variant { vanilla, cuckooing, cyclic, swapping };

const char* variant_name(Variant v);

enum class InsertResult { stored, stored_after_rebuild, duplicate, capacity_exceeded };

struct Move {
  Element element;
  Location from;
  Location to;
};

// One execution of the fixing function (one colliding slot and the chain it
// triggered). Instrumentation receives these through FixObserver.
struct FixExecution {
  std::vector<Move> moves;
  bool looped = false;
  bool rebuilt = false;
};

struct FixReport {
  bool was_false_positive = false;
  std::vector<Move> moved;  // all executions of this fix call, in order
  bool looped = false;      // some element repeats within moved
  bool rebuilt = false;
};

struct ChainResult {
  enum class Kind { placed, needs_rebuild } kind = Kind::placed;
  // Set when needs_rebuild: the element left in hand (already removed from
  // the grid and dictionary). The caller must rebuild with it or restore it.
  Element pending;
};

class FixObserver {
 public:
  virtual ~FixObserver() = default;
  virtual void on_fix_execution(const FixExecution& exec) = 0;
};

class Filter {
 public:
  Filter(FilterParams params, Variant variant, uint64_t seed);

  // Copies detach the observer; everything else (rng state included) carries
  // over, so a copy replays deterministically.
  Filter(const Filter& other);
  Filter& operator=(const Filter& other);
  Filter(Filter&&) = default;
  Filter& operator=(Filter&&) = default;

  InsertResult insert(const Element& x);
  bool query(const Element& q) const;
  bool contains(const Element& x) const { return dict_.contains(x); }

  // Dispatches on the variant. Requires q outside the stored set.
  FixReport fix(const Element& q);

  // Reseed, clear, reinsert everything. Throws rebuild_error after the
  // attempt cap.
  void rebuild();

  // First empty candidate slot in (lowest table, lowest slot) order.
  std::optional<Location> find_empty_slot(const Element& x) const;

  // Low-level eviction chain starting at start_table, whose bin must be
  // full. Used by insert internally; exposed for direct exercise.
  ChainResult try_place_with_eviction(const Element& x, uint32_t start_table,
                                      std::vector<Move>* moves = nullptr);

  // Full-grid audit: dictionary bijection, occupancy accounting, and every
  // occupied slot's fingerprint against the variant rule. Throws
  // consistency_error on any violation.
  void audit_consistency() const;

  const FilterParams& params() const { return params_; }
  Variant variant() const { return variant_; }
  const HashFamily& family() const { return family_; }
  const TableSet& tables() const { return tables_; }
  const ReverseDictionary& dict() const { return dict_; }
  size_t size() const { return dict_.size(); }
  size_t capacity() const { return params_.n; }
  uint64_t rebuild_count() const { return rebuild_count_; }

  void set_fix_observer(FixObserver* obs) { observer_ = obs; }

  // Expected fingerprint of q at an occupied slot under this variant's rule.
  uint16_t expected_fingerprint(const Element& q, const Location& loc,
                                const Slot& slot) const;

 private:
  struct MoveSink {
    std::vector<Move>* out = nullptr;
    ptrdiff_t pending = -1;  // index of the move whose landing spot is unknown

    void displaced(const Element& e, const Location& from) {
      if (!out) return;
      out->push_back(Move{e, from, Location{}});
      pending = static_cast<ptrdiff_t>(out->size()) - 1;
    }
    void landed(const Location& to) {
      if (!out || pending < 0) return;
      (*out)[static_cast<size_t>(pending)].to = to;
      pending = -1;
    }
  };

  uint16_t placement_fingerprint(const Element& e, const Location& loc) const;
  void place(const Element& e, const Location& loc, MoveSink* sink);
  ChainResult run_chain(Element e, uint32_t table, MoveSink* sink);
  void do_rebuild(std::vector<Element> pending);
  std::vector<Location> colliding_locations(const Element& q) const;
  bool still_collides(const Element& q, const Location& loc) const;

  FixReport fix_cuckooing(const Element& q);
  FixReport fix_cyclic(const Element& q);
  FixReport fix_swapping(const Element& q);

  void emit_execution(FixExecution&& exec, FixReport& report);

  static constexpr uint32_t kRebuildAttemptCap = 20;

  FilterParams params_;
  Variant variant_ = Variant::vanilla;
  HashFamily family_;
  TableSet tables_;
  ReverseDictionary dict_;
  Rng rng_;
  uint64_t rebuild_count_ = 0;
  FixObserver* observer_ = nullptr;
};

bool any_element_repeats(const std::vector<Move>& moves);

}  // namespace acf

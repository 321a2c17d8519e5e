// Usable under the terms in the Apache License, Version 2.0.
//
// The adaptivity game and the attack strategies against each filter variant.
// Strategies are black boxes: they see only false-positive bits and the
// public filter parameters, never table contents or seeds. The game runner
// answers queries, applies the variant's fix after every false positive, and
// scores the named element q-hat with one final query.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "acf/filter.hpp"
#include "acf/rng.hpp"

namespace acf {

struct AttackOutcome {
  enum class Kind { found, exhausted, aborted_qd_too_large };

  Kind kind = Kind::exhausted;
  std::optional<Element> q_hat;
  size_t queries_used = 0;  // includes the final scoring query when q_hat is named
  size_t qd_size = 0;       // round-robin attack: |Q_d|
  bool win = false;         // the final q_hat query answered present
  std::vector<Element> support;        // round-robin attack: the drawn Q
  std::optional<std::vector<bool>> trace;  // per-query false-positive bits
};

const char* outcome_name(AttackOutcome::Kind kind);

class GameContext {
 public:
  GameContext(Filter& filter, Rng& rng, size_t budget, std::vector<bool>* trace)
      : filter_(filter), rng_(rng), budget_(budget), trace_(trace) {}

  // Issue one query. Returns whether it was a false positive; the filter
  // fixes it if so.
  bool query(const Element& q);

  // Uniform 64-bit key outside the stored set.
  Element fresh_random_key();

  Rng& rng() { return rng_; }
  const FilterParams& params() const { return filter_.params(); }
  size_t queries_used() const { return used_; }

 private:
  Filter& filter_;
  Rng& rng_;
  size_t budget_ = 0;
  size_t used_ = 0;
  std::vector<bool>* trace_ = nullptr;
};

struct StrategyResult {
  AttackOutcome::Kind kind = AttackOutcome::Kind::exhausted;
  std::optional<Element> q_hat;
  size_t qd_size = 0;
  std::vector<Element> support;
};

using Strategy = std::function<StrategyResult(GameContext&)>;

// Runs a strategy to completion, then queries q_hat once more; win iff that
// final query answers present. The filter must hold exactly n elements.
AttackOutcome play_adaptivity_game(Filter& filter, const Strategy& strategy, Rng& rng,
                                   size_t budget, bool keep_trace = false);

// Repeated-candidate attack on the cyclic filter: each fresh random
// candidate is queried 2^s times and named when every answer is a false
// positive. Budget: budget_multiplier / epsilon^(2^s) candidates.
AttackOutcome attack_cyclic(Filter& filter, double budget_multiplier, Rng& rng,
                            bool keep_trace = false);

// Same shape against the swapping filter with b queries per candidate and a
// budget of budget_multiplier / epsilon^b candidates.
AttackOutcome attack_swapping(Filter& filter, double budget_multiplier, Rng& rng,
                              bool keep_trace = false);

// Attack on the cuckooing filter (b=1): draw Q of size
// ceil((1+1/k) * N / (epsilon * n^(1/k))), run k preliminary and k testing
// rounds over Q in fresh random order, collect testing-round false positives
// into Q_d (abort when |Q_d| > c_qd * k), then C(|Q_d|,k)*k! permutation
// rounds each querying a random ordered k-subset of Q_d twice through.
AttackOutcome attack_round_robin(Filter& filter, uint32_t c_qd, Rng& rng,
                                 bool keep_trace = false);

size_t round_robin_support_size(const FilterParams& params);

// A query set that blocks one stored element: some member collides with it
// under every hash index, so no configuration clears all of them.
struct MutuallyUnfixableSet {
  Element target;
  std::vector<Element> members;  // all colliding queries, in Q order
};

// Exhaustive full-hash oracle over S x Q: an element enters the result when
// every table index has at least one colliding query. Fingerprints are taken
// at index 0 (the cuckooing rule).
std::vector<MutuallyUnfixableSet> find_mutually_unfixable(
    const std::vector<Element>& stored, const std::vector<Element>& queries,
    const HashFamily& family);

struct RangeSets {
  // Per-table set of (bin, fingerprint) values attained by the query set.
  std::vector<std::vector<uint64_t>> ranges;
  // Stored elements possessing a mutually unfixable subset.
  std::vector<Element> x_q;
};

RangeSets compute_range_sets(const std::vector<Element>& stored,
                             const std::vector<Element>& queries,
                             const HashFamily& family);

struct AttackRow {
  uint32_t trial = 0;
  uint64_t seed = 0;
  AttackOutcome::Kind outcome = AttackOutcome::Kind::exhausted;
  size_t queries_used = 0;
  size_t qd_size = 0;
  bool win = false;
};

// (trial, seed, outcome, queries_used, qd_size, win)
void write_attack_csv(std::ostream& out, const std::vector<AttackRow>& rows);

}  // namespace acf

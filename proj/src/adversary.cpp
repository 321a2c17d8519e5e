// Usable under the terms in the Apache License, Version 2.0.
#include "acf/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "acf/errors.hpp"

namespace acf {

const char* outcome_name(AttackOutcome::Kind kind) {
  switch (kind) {
    case AttackOutcome::Kind::found: return "found";
    case AttackOutcome::Kind::exhausted: return "exhausted";
    case AttackOutcome::Kind::aborted_qd_too_large: return "aborted_qd_too_large";
  }
  return "?";
}

bool GameContext::query(const Element& q) {
  if (used_ >= budget_) throw budget_error("adversary exceeded its query budget");
  ++used_;
  const bool present = filter_.query(q);
  const bool fp = present && !filter_.contains(q);
  if (fp) filter_.fix(q);
  if (trace_) trace_->push_back(fp);
  return fp;
}

Element GameContext::fresh_random_key() {
  for (;;) {
    Element q = rng_.random_key();
    if (!filter_.contains(q)) return q;
  }
}

AttackOutcome play_adaptivity_game(Filter& filter, const Strategy& strategy, Rng& rng,
                                   size_t budget, bool keep_trace) {
  if (filter.size() != filter.capacity())
    throw contract_error("adaptivity game: filter must be loaded with n elements");
  AttackOutcome out;
  std::vector<bool> trace;
  GameContext ctx(filter, rng, budget, keep_trace ? &trace : nullptr);
  StrategyResult res = strategy(ctx);
  out.kind = res.kind;
  out.qd_size = res.qd_size;
  out.support = std::move(res.support);
  if (res.kind == AttackOutcome::Kind::found) {
    if (!res.q_hat) throw contract_error("adaptivity game: found without q_hat");
    if (filter.contains(*res.q_hat))
      throw contract_error("adaptivity game: q_hat must lie outside the stored set");
    out.q_hat = res.q_hat;
    out.win = ctx.query(*res.q_hat);  // the one scoring query
  }
  out.queries_used = ctx.queries_used();
  if (keep_trace) out.trace = std::move(trace);
  return out;
}

namespace {

size_t candidate_budget(double budget_multiplier, double epsilon, uint32_t tries_each) {
  if (budget_multiplier <= 0.0) return 0;
  const long double denom = std::pow(static_cast<long double>(epsilon),
                                     static_cast<long double>(tries_each));
  return static_cast<size_t>(
      std::floor(static_cast<long double>(budget_multiplier) / denom + 1e-9L));
}

AttackOutcome repeated_candidate_attack(Filter& filter, double budget_multiplier,
                                        uint32_t tries_each, Rng& rng, bool keep_trace) {
  const double eps = filter.params().epsilon_target;
  const size_t max_candidates = candidate_budget(budget_multiplier, eps, tries_each);
  const size_t budget = max_candidates * tries_each + 1;

  Strategy strategy = [&, max_candidates](GameContext& ctx) -> StrategyResult {
    for (size_t c = 0; c < max_candidates; ++c) {
      Element q = ctx.fresh_random_key();
      bool all_fp = true;
      for (uint32_t j = 0; j < tries_each; ++j) {
        if (!ctx.query(q)) {  // abandoned at the first clean answer
          all_fp = false;
          break;
        }
      }
      if (all_fp) return StrategyResult{AttackOutcome::Kind::found, q, 0, {}};
    }
    return StrategyResult{};
  };
  return play_adaptivity_game(filter, strategy, rng, budget, keep_trace);
}

uint64_t binomial(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  uint64_t r = 1;
  for (uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

uint64_t factorial(uint64_t k) {
  uint64_t r = 1;
  for (uint64_t i = 2; i <= k; ++i) r *= i;
  return r;
}

}  // namespace

AttackOutcome attack_cyclic(Filter& filter, double budget_multiplier, Rng& rng,
                            bool keep_trace) {
  if (filter.variant() != Variant::cyclic)
    throw contract_error("attack_cyclic targets the cyclic variant");
  return repeated_candidate_attack(filter, budget_multiplier,
                                   1u << filter.params().s, rng, keep_trace);
}

AttackOutcome attack_swapping(Filter& filter, double budget_multiplier, Rng& rng,
                              bool keep_trace) {
  if (filter.variant() != Variant::swapping)
    throw contract_error("attack_swapping targets the swapping variant");
  return repeated_candidate_attack(filter, budget_multiplier, filter.params().b, rng,
                                   keep_trace);
}

size_t round_robin_support_size(const FilterParams& p) {
  const long double k = p.k;
  const long double val = (1.0L + 1.0L / k) * p.N /
                          (static_cast<long double>(p.epsilon_target) *
                           std::pow(static_cast<long double>(p.n), 1.0L / k));
  return static_cast<size_t>(std::ceil(val - 1e-9L));
}

AttackOutcome attack_round_robin(Filter& filter, uint32_t c_qd, Rng& rng,
                                 bool keep_trace) {
  if (filter.variant() != Variant::cuckooing || filter.params().b != 1)
    throw contract_error("attack_round_robin targets the cuckooing variant with b = 1");
  const FilterParams& p = filter.params();
  const uint32_t k = p.k;
  const size_t q_size = round_robin_support_size(p);
  const size_t budget = 2 * k * q_size +
                        2 * k * binomial(static_cast<uint64_t>(c_qd) * k, k) *
                            factorial(k) +
                        1;

  Strategy strategy = [&](GameContext& ctx) -> StrategyResult {
    // Distinct random queries outside the stored set.
    std::vector<Element> support;
    std::unordered_set<Element> seen;
    while (support.size() < q_size) {
      Element q = ctx.fresh_random_key();
      if (seen.insert(q).second) support.push_back(q);
    }

    std::vector<Element> order = support;
    std::vector<Element> qd;
    std::unordered_set<Element> qd_seen;
    for (uint32_t round = 0; round < 2 * k; ++round) {
      std::shuffle(order.begin(), order.end(), ctx.rng().engine());
      const bool testing = round >= k;
      for (const Element& q : order) {
        const bool fp = ctx.query(q);
        if (fp && testing && qd_seen.insert(q).second) qd.push_back(q);
      }
    }

    StrategyResult res;
    res.qd_size = qd.size();
    res.support = support;
    if (qd.size() > static_cast<size_t>(c_qd) * k) {
      res.kind = AttackOutcome::Kind::aborted_qd_too_large;
      return res;
    }
    if (qd.size() < k) {
      res.kind = AttackOutcome::Kind::exhausted;
      return res;
    }

    const uint64_t rounds = binomial(qd.size(), k) * factorial(k);
    std::vector<size_t> idx(qd.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (uint64_t r = 0; r < rounds; ++r) {
      // Partial shuffle: the first k entries are a uniform ordered k-subset,
      // i.e. a uniform subset Q_r plus a uniform permutation of it.
      for (uint32_t i = 0; i < k; ++i) {
        const size_t j = i + static_cast<size_t>(ctx.rng().below(idx.size() - i));
        std::swap(idx[i], idx[j]);
      }
      bool all_fp = true;
      for (uint32_t rep = 0; rep < 2 && all_fp; ++rep)
        for (uint32_t i = 0; i < k; ++i)
          if (!ctx.query(qd[idx[i]])) {
            all_fp = false;
            break;
          }
      if (all_fp) {
        res.kind = AttackOutcome::Kind::found;
        res.q_hat = qd[idx[0]];
        return res;
      }
    }
    res.kind = AttackOutcome::Kind::exhausted;
    return res;
  };
  return play_adaptivity_game(filter, strategy, rng, budget, keep_trace);
}

namespace {

uint64_t full_hash(const HashFamily& family, uint32_t table, const Element& e) {
  return (static_cast<uint64_t>(family.location(table, e)) << 16) |
         family.fingerprint(e, 0);
}

}  // namespace

std::vector<MutuallyUnfixableSet> find_mutually_unfixable(
    const std::vector<Element>& stored, const std::vector<Element>& queries,
    const HashFamily& family) {
  const uint32_t k = family.table_count();
  // Per table: full hash value -> query indices attaining it.
  std::vector<std::unordered_map<uint64_t, std::vector<size_t>>> by_value(k);
  for (uint32_t t = 0; t < k; ++t)
    for (size_t i = 0; i < queries.size(); ++i)
      by_value[t][full_hash(family, t, queries[i])].push_back(i);

  std::vector<MutuallyUnfixableSet> out;
  for (const Element& x : stored) {
    std::vector<size_t> members;
    bool covered = true;
    for (uint32_t t = 0; t < k && covered; ++t) {
      auto it = by_value[t].find(full_hash(family, t, x));
      if (it == by_value[t].end()) {
        covered = false;
        break;
      }
      members.insert(members.end(), it->second.begin(), it->second.end());
    }
    if (!covered) continue;
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    MutuallyUnfixableSet set;
    set.target = x;
    set.members.reserve(members.size());
    for (size_t i : members) set.members.push_back(queries[i]);
    out.push_back(std::move(set));
  }
  return out;
}

RangeSets compute_range_sets(const std::vector<Element>& stored,
                             const std::vector<Element>& queries,
                             const HashFamily& family) {
  const uint32_t k = family.table_count();
  RangeSets rs;
  rs.ranges.resize(k);
  std::vector<std::unordered_set<uint64_t>> sets(k);
  for (uint32_t t = 0; t < k; ++t) {
    for (const Element& q : queries) sets[t].insert(full_hash(family, t, q));
    rs.ranges[t].assign(sets[t].begin(), sets[t].end());
    std::sort(rs.ranges[t].begin(), rs.ranges[t].end());
  }
  for (const Element& x : stored) {
    bool covered = true;
    for (uint32_t t = 0; t < k; ++t) {
      if (sets[t].count(full_hash(family, t, x)) == 0) {
        covered = false;
        break;
      }
    }
    if (covered) rs.x_q.push_back(x);
  }
  return rs;
}

void write_attack_csv(std::ostream& out, const std::vector<AttackRow>& rows) {
  out << "trial,seed,outcome,queries_used,qd_size,win\n";
  for (const AttackRow& r : rows) {
    out << r.trial << ',' << r.seed << ',' << outcome_name(r.outcome) << ','
        << r.queries_used << ',' << r.qd_size << ',' << (r.win ? 1 : 0) << '\n';
  }
}

}  // namespace acf

// Usable under the terms in the Apache License, Version 2.0.
#include "acf/audit.hpp"

#include <sstream>

#include "acf/instrumentation.hpp"
#include "acf/params.hpp"
#include "acf/rng.hpp"

namespace acf {
namespace audit {

void FuzzStats::merge(const FuzzStats& other) {
  ops += other.ops;
  inserts += other.inserts;
  queries += other.queries;
  fixes += other.fixes;
  rebuilds += other.rebuilds;
  violations += other.violations;
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

namespace {

void note_violation(FuzzStats& stats, const std::string& what) {
  ++stats.violations;
  if (stats.failures.size() < 20) stats.failures.push_back(what);
}

// Every stored element must answer present.
void membership_sweep(const Filter& filter, const std::vector<Element>& stored,
                      FuzzStats& stats, size_t op) {
  for (const Element& e : stored) {
    if (!filter.query(e)) {
      std::ostringstream msg;
      msg << variant_name(filter.variant()) << " op " << op
          << ": stored element answered absent";
      note_violation(stats, msg.str());
    }
  }
}

}  // namespace

FuzzStats run_fuzz(const FuzzConfig& cfg) {
  FuzzStats stats;
  FilterParams params = derive_params(cfg.n, cfg.k, cfg.b, cfg.gamma, cfg.f, cfg.s);
  Filter filter(params, cfg.variant, mix_seed(cfg.seed, 0x0f));
  Rng rng(mix_seed(cfg.seed, 0xa1));
  std::vector<Element> stored;
  stored.reserve(cfg.n);

  for (size_t op = 0; op < cfg.ops; ++op) {
    ++stats.ops;
    const uint64_t roll = rng.below(100);
    if (roll < 40 && stored.size() < cfg.n) {
      Element x = rng.random_key();
      const InsertResult res = filter.insert(x);
      if (res == InsertResult::stored || res == InsertResult::stored_after_rebuild) {
        stored.push_back(std::move(x));
        ++stats.inserts;
      }
    } else {
      // Query a stored element or a fresh key; fix false positives.
      Element q;
      if (!stored.empty() && rng.below(2) == 0) {
        q = stored[rng.below(stored.size())];
      } else {
        q = rng.random_key();
      }
      ++stats.queries;
      const bool present = filter.query(q);
      const bool is_member = filter.contains(q);
      if (is_member && !present) {
        note_violation(stats, std::string(variant_name(cfg.variant)) +
                                  ": member answered absent on direct query");
      }
      if (present && !is_member && cfg.variant != Variant::vanilla) {
        filter.fix(q);
        ++stats.fixes;
      }
    }
    membership_sweep(filter, stored, stats, op);
    if (cfg.grid_audit_every != 0 && op % cfg.grid_audit_every == 0) {
      try {
        filter.audit_consistency();
      } catch (const consistency_error& e) {
        note_violation(stats, e.what());
      }
    }
  }
  try {
    filter.audit_consistency();
  } catch (const consistency_error& e) {
    note_violation(stats, e.what());
  }
  stats.rebuilds = filter.rebuild_count();
  return stats;
}

std::vector<FuzzConfig> variant_roster(uint64_t seed, size_t total_ops) {
  const size_t each = total_ops / 4;
  // k=2, b=1 grids can only be filled below half load; the others run denser.
  std::vector<FuzzConfig> configs;
  configs.push_back({Variant::vanilla, 120, 4, 1, 6, 0, 1.25, mix_seed(seed, 1), each, 500});
  configs.push_back({Variant::cuckooing, 120, 2, 1, 5, 0, 2.2, mix_seed(seed, 2), each, 500});
  configs.push_back({Variant::cyclic, 120, 4, 1, 5, 1, 1.25, mix_seed(seed, 3), each, 500});
  configs.push_back({Variant::swapping, 120, 2, 4, 5, 0, 1.25, mix_seed(seed, 4), each, 500});
  return configs;
}

SuffixFuzzStats run_suffix_fuzz(const SuffixFuzzConfig& cfg) {
  SuffixFuzzStats stats;
  FilterParams params = derive_params(cfg.n, 2, 1, 2.0, cfg.f, 0);
  Filter filter(params, Variant::cuckooing, mix_seed(cfg.seed, 0x5f));
  Rng rng(mix_seed(cfg.seed, 0xb2));
  for (size_t i = 0; i < cfg.n; ++i) {
    while (filter.insert(rng.random_key()) == InsertResult::duplicate) {
    }
  }
  Instrumentation instr(filter);
  instr.arm({});

  size_t checked_through = 0;
  while (stats.paths < cfg.target_paths) {
    Element q = rng.random_key();
    if (filter.contains(q)) continue;
    instr.begin_query(q);
    ++stats.queries;
    if (filter.query(q)) filter.fix(q);
    const auto& recs = instr.records();
    for (; checked_through < recs.size(); ++checked_through) {
      const PathRecord& rec = recs[checked_through];
      ++stats.paths;
      if (rec.looped || rec.rebuilt) {
        stats.looped += rec.looped ? 1 : 0;
        continue;
      }
      if (!check_suffix_property(rec, instr.state().baseline)) ++stats.violations;
    }
    if (stats.queries > cfg.target_paths * 100) break;  // safety valve
  }
  return stats;
}

}  // namespace audit
}  // namespace acf

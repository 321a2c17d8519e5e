// Usable under the terms in the Apache License, Version 2.0.
#include "acf/filter.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace acf {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::vanilla: return "vanilla";
    case Variant::cuckooing: return "cuckooing";
    case Variant::cyclic: return "cyclic";
    case Variant::swapping: return "swapping";
  }
  return "?";
}

bool any_element_repeats(const std::vector<Move>& moves) {
  std::unordered_set<Element> seen;
  for (const Move& m : moves)
    if (!seen.insert(m.element).second) return true;
  return false;
}

namespace {

uint32_t selector_domain_for(Variant v, const FilterParams& p) {
  switch (v) {
    case Variant::vanilla:
    case Variant::cuckooing: return 1;
    case Variant::cyclic: return 1u << p.s;
    case Variant::swapping: return p.b;
  }
  return 1;
}

}  // namespace

Filter::Filter(FilterParams params, Variant variant, uint64_t seed)
    : params_(params),
      variant_(variant),
      family_(),
      tables_(params.k, params.N, params.b),
      dict_(params.k, params.N, params.b),
      rng_(seed) {
  // Geometry must be structurally usable; full coverage validation belongs
  // to derive_params (tests exercise deliberately under-provisioned grids).
  if (params_.k < 2 || params_.b < 1 || params_.N < 1 || params_.n < 1)
    throw std::invalid_argument("filter: unusable geometry");
  if (params_.f < 1 || params_.f > 16)
    throw std::invalid_argument("filter: fingerprint bits must be in [1,16]");
  if (params_.max_kicks < 1)
    throw std::invalid_argument("filter: max_kicks must be positive");
  if (variant_ == Variant::cyclic) {
    if (params_.b != 1) throw std::invalid_argument("cyclic variant requires b = 1");
    if (params_.s < 1) throw std::invalid_argument("cyclic variant requires s >= 1");
  } else {
    if (params_.s != 0) throw std::invalid_argument("selector bits only apply to cyclic");
    if (variant_ == Variant::swapping && params_.b < 2)
      throw std::invalid_argument("swapping variant requires b > 1");
  }
  HashFamily drawn = HashFamily::draw(params_.k, params_.N, params_.f,
                                      selector_domain_for(variant_, params_), rng_);
  family_ = drawn;
}

Filter::Filter(const Filter& other)
    : params_(other.params_),
      variant_(other.variant_),
      family_(other.family_),
      tables_(other.tables_),
      dict_(other.dict_),
      rng_(other.rng_),
      rebuild_count_(other.rebuild_count_),
      observer_(nullptr) {}

Filter& Filter::operator=(const Filter& other) {
  if (this != &other) {
    params_ = other.params_;
    variant_ = other.variant_;
    family_ = other.family_;
    tables_ = other.tables_;
    dict_ = other.dict_;
    rng_ = other.rng_;
    rebuild_count_ = other.rebuild_count_;
    observer_ = nullptr;
  }
  return *this;
}

uint16_t Filter::expected_fingerprint(const Element& q, const Location& loc,
                                      const Slot& slot) const {
  switch (variant_) {
    case Variant::vanilla:
    case Variant::cuckooing: return family_.fingerprint(q, 0);
    case Variant::cyclic: return family_.fingerprint(q, slot.selector);
    case Variant::swapping: return family_.fingerprint(q, loc.slot);
  }
  return 0;
}

uint16_t Filter::placement_fingerprint(const Element& e, const Location& loc) const {
  // Fresh placements use selector 0 (cyclic) or the landing slot (swapping).
  if (variant_ == Variant::swapping) return family_.fingerprint(e, loc.slot);
  return family_.fingerprint(e, 0);
}

void Filter::place(const Element& e, const Location& loc, MoveSink* sink) {
  tables_.place(loc, placement_fingerprint(e, loc), 0);
  dict_.store(e, loc);
  if (sink) sink->landed(loc);
}

std::optional<Location> Filter::find_empty_slot(const Element& x) const {
  for (uint32_t t = 0; t < params_.k; ++t) {
    const uint32_t bin = family_.location(t, x);
    if (auto slot = tables_.first_empty_slot(t, bin))
      return Location{t, bin, *slot};
  }
  return std::nullopt;
}

ChainResult Filter::run_chain(Element e, uint32_t table, MoveSink* sink) {
  // The incoming element is bound to `table` (a fixed collider advances to
  // beta+1 even when another bin is free). Displaced occupants follow the
  // insert rule: any empty candidate slot first, else advance one table and
  // displace onward.
  for (uint32_t kicks = 0;; ++kicks) {
    const uint32_t bin = family_.location(table, e);
    if (auto slot = tables_.first_empty_slot(table, bin)) {
      place(e, Location{table, bin, *slot}, sink);
      return ChainResult{ChainResult::Kind::placed, {}};
    }
    if (kicks >= params_.max_kicks)
      return ChainResult{ChainResult::Kind::needs_rebuild, std::move(e)};
    const Location loc{table, bin, static_cast<uint32_t>(rng_.below(params_.b))};
    Element victim = dict_.element_at(loc);
    dict_.remove_at(loc);
    tables_.clear(loc);
    place(e, loc, sink);
    if (sink) sink->displaced(victim, loc);
    e = std::move(victim);
    if (auto spot = find_empty_slot(e)) {
      place(e, *spot, sink);
      return ChainResult{ChainResult::Kind::placed, {}};
    }
    table = (loc.table + 1) % params_.k;
  }
}

ChainResult Filter::try_place_with_eviction(const Element& x, uint32_t start_table,
                                            std::vector<Move>* moves) {
  if (start_table >= params_.k)
    throw contract_error("evict_chain: start table out of range");
  const uint32_t bin = family_.location(start_table, x);
  if (tables_.first_empty_slot(start_table, bin))
    throw contract_error("evict_chain: start bin is not full");
  MoveSink sink{moves, -1};
  return run_chain(x, start_table, &sink);
}

InsertResult Filter::insert(const Element& x) {
  if (dict_.contains(x)) return InsertResult::duplicate;
  if (dict_.size() >= params_.n) return InsertResult::capacity_exceeded;
  if (auto loc = find_empty_slot(x)) {
    place(x, *loc, nullptr);
    return InsertResult::stored;
  }
  MoveSink sink{nullptr, -1};
  ChainResult res = run_chain(x, static_cast<uint32_t>(rng_.below(params_.k)), &sink);
  if (res.kind == ChainResult::Kind::placed) return InsertResult::stored;
  do_rebuild({std::move(res.pending)});
  return InsertResult::stored_after_rebuild;
}

bool Filter::query(const Element& q) const {
  // Memoize fingerprint variants; the selector domain is tiny.
  constexpr uint32_t kMemo = 16;
  uint16_t memo[kMemo];
  bool have[kMemo] = {};
  for (uint32_t t = 0; t < params_.k; ++t) {
    const uint32_t bin = family_.location(t, q);
    for (uint32_t s = 0; s < params_.b; ++s) {
      const Location loc{t, bin, s};
      const Slot& slot = tables_.at(loc);
      if (!slot.occupied) continue;
      uint32_t idx = 0;
      switch (variant_) {
        case Variant::vanilla:
        case Variant::cuckooing: idx = 0; break;
        case Variant::cyclic: idx = slot.selector; break;
        case Variant::swapping: idx = s; break;
      }
      uint16_t fp;
      if (idx < kMemo) {
        if (!have[idx]) {
          memo[idx] = family_.fingerprint(q, idx);
          have[idx] = true;
        }
        fp = memo[idx];
      } else {
        fp = family_.fingerprint(q, idx);
      }
      if (slot.fingerprint == fp) return true;
    }
  }
  return false;
}

std::vector<Location> Filter::colliding_locations(const Element& q) const {
  std::vector<Location> out;
  for (uint32_t t = 0; t < params_.k; ++t) {
    const uint32_t bin = family_.location(t, q);
    for (uint32_t s = 0; s < params_.b; ++s) {
      const Location loc{t, bin, s};
      const Slot& slot = tables_.at(loc);
      if (slot.occupied && slot.fingerprint == expected_fingerprint(q, loc, slot))
        out.push_back(loc);
    }
  }
  return out;
}

bool Filter::still_collides(const Element& q, const Location& loc) const {
  const Slot& slot = tables_.at(loc);
  return slot.occupied && slot.fingerprint == expected_fingerprint(q, loc, slot);
}

FixReport Filter::fix(const Element& q) {
  if (dict_.contains(q))
    throw contract_error("fix: query element is stored in the set");
  switch (variant_) {
    case Variant::vanilla: return FixReport{};  // never adapts
    case Variant::cuckooing: return fix_cuckooing(q);
    case Variant::cyclic: return fix_cyclic(q);
    case Variant::swapping: return fix_swapping(q);
  }
  return FixReport{};
}

void Filter::emit_execution(FixExecution&& exec, FixReport& report) {
  exec.looped = any_element_repeats(exec.moves);
  report.moved.insert(report.moved.end(), exec.moves.begin(), exec.moves.end());
  if (exec.rebuilt) report.rebuilt = true;
  if (observer_) observer_->on_fix_execution(exec);
}

FixReport Filter::fix_cuckooing(const Element& q) {
  FixReport report;
  const std::vector<Location> colliders = colliding_locations(q);
  report.was_false_positive = !colliders.empty();
  for (const Location& loc : colliders) {
    // An earlier chain of this same fix call may have cleared or refilled
    // the slot; only a slot that still collides gets moved.
    if (!still_collides(q, loc)) continue;
    Element x = dict_.element_at(loc);
    dict_.remove_at(loc);
    tables_.clear(loc);
    FixExecution exec;
    exec.moves.push_back(Move{x, loc, Location{}});
    MoveSink sink{&exec.moves, 0};
    ChainResult res = run_chain(std::move(x), (loc.table + 1) % params_.k, &sink);
    if (res.kind == ChainResult::Kind::needs_rebuild) {
      const ptrdiff_t unlanded = sink.pending;
      do_rebuild({std::move(res.pending)});
      exec.rebuilt = true;
      if (unlanded >= 0) {
        // The in-hand element lands wherever the rebuild put it.
        Move& m = exec.moves[static_cast<size_t>(unlanded)];
        if (auto now = dict_.lookup(m.element)) m.to = *now;
      }
      emit_execution(std::move(exec), report);
      break;  // the configuration was replaced wholesale; stop here
    }
    emit_execution(std::move(exec), report);
  }
  report.looped = any_element_repeats(report.moved);
  return report;
}

FixReport Filter::fix_cyclic(const Element& q) {
  FixReport report;
  const std::vector<Location> colliders = colliding_locations(q);
  report.was_false_positive = !colliders.empty();
  const uint32_t wrap = 1u << params_.s;
  for (const Location& loc : colliders) {
    if (!still_collides(q, loc)) continue;
    const Element& x = dict_.element_at(loc);
    const uint8_t next = static_cast<uint8_t>((tables_.at(loc).selector + 1) % wrap);
    tables_.rewrite(loc, family_.fingerprint(x, next), next);
    report.moved.push_back(Move{x, loc, loc});  // selector advanced in place
  }
  return report;
}

FixReport Filter::fix_swapping(const Element& q) {
  FixReport report;
  const std::vector<Location> colliders = colliding_locations(q);
  report.was_false_positive = !colliders.empty();
  for (const Location& loc : colliders) {
    if (!still_collides(q, loc)) continue;
    Element x = dict_.element_at(loc);
    const uint64_t r = rng_.below(params_.b - 1);
    const uint32_t other = static_cast<uint32_t>(r >= loc.slot ? r + 1 : r);
    const Location dest{loc.table, loc.bin, other};
    if (tables_.at(dest).occupied) {
      Element y = dict_.element_at(dest);
      dict_.remove_at(loc);
      dict_.remove_at(dest);
      tables_.clear(loc);
      tables_.clear(dest);
      tables_.place(dest, family_.fingerprint(x, dest.slot), 0);
      dict_.store(x, dest);
      tables_.place(loc, family_.fingerprint(y, loc.slot), 0);
      dict_.store(y, loc);
      report.moved.push_back(Move{x, loc, dest});
      report.moved.push_back(Move{std::move(y), dest, loc});
    } else {
      tables_.clear(loc);
      tables_.place(dest, family_.fingerprint(x, dest.slot), 0);
      dict_.relocate(loc, dest);
      report.moved.push_back(Move{std::move(x), loc, dest});
    }
  }
  report.looped = any_element_repeats(report.moved);
  return report;
}

void Filter::rebuild() { do_rebuild({}); }

void Filter::do_rebuild(std::vector<Element> pending) {
  std::vector<Element> elems;
  elems.reserve(dict_.size() + pending.size());
  dict_.for_each_sorted([&](const Location&, const Element& e) { elems.push_back(e); });
  for (Element& e : pending) elems.push_back(std::move(e));

  for (uint32_t attempt = 0; attempt < kRebuildAttemptCap; ++attempt) {
    ++rebuild_count_;
    family_ = family_.reseeded(rng_);
    tables_.clear_all();
    dict_.clear();
    bool ok = true;
    for (const Element& e : elems) {
      if (auto loc = find_empty_slot(e)) {
        place(e, *loc, nullptr);
        continue;
      }
      MoveSink sink{nullptr, -1};
      ChainResult res = run_chain(e, static_cast<uint32_t>(rng_.below(params_.k)), &sink);
      if (res.kind == ChainResult::Kind::needs_rebuild) {
        ok = false;
        break;
      }
    }
    if (ok) return;
  }
  throw rebuild_error("rebuild: no working configuration within the attempt cap");
}

void Filter::audit_consistency() const {
  if (dict_.size() != tables_.occupancy_count())
    throw consistency_error("audit: dictionary size != occupied slot count");
  size_t seen = 0;
  for (uint32_t t = 0; t < params_.k; ++t) {
    for (uint32_t bin = 0; bin < params_.N; ++bin) {
      for (uint32_t s = 0; s < params_.b; ++s) {
        const Location loc{t, bin, s};
        const Slot& slot = tables_.at(loc);
        if (!slot.occupied) continue;
        ++seen;
        const Element& e = dict_.peek_at(loc);
        auto fwd = dict_.lookup(e);
        if (!fwd || !(*fwd == loc))
          throw consistency_error("audit: forward/reverse maps disagree");
        if (variant_ == Variant::cyclic) {
          if (slot.selector >= (1u << params_.s))
            throw consistency_error("audit: selector out of domain");
        } else if (slot.selector != 0) {
          throw consistency_error("audit: selector set on non-cyclic slot");
        }
        if (slot.fingerprint != expected_fingerprint(e, loc, slot))
          throw consistency_error("audit: stored fingerprint violates variant rule");
        if (family_.location(t, e) != bin)
          throw consistency_error("audit: element stored in a non-candidate bin");
      }
    }
  }
  if (seen != dict_.size())
    throw consistency_error("audit: occupied slots do not cover the dictionary");
}

}  // namespace acf

// Usable under the terms in the Apache License, Version 2.0.
#include <doctest.h>

#include <sstream>

#include "acf/audit.hpp"
#include "acf/instrumentation.hpp"
#include "oracles.hpp"

using namespace acf;

namespace {

Filter theory_filter(size_t n, uint32_t f, uint64_t seed) {
  return Filter(derive_params(n, 2, 1, 2.0, f), Variant::cuckooing, seed);
}

void fill_random(Filter& filter, Rng& rng) {
  while (filter.size() < filter.capacity()) filter.insert(rng.random_key());
}

std::vector<Element> random_support(const Filter& filter, size_t count, Rng& rng) {
  std::vector<Element> support;
  while (support.size() < count) {
    Element q = rng.random_key();
    if (!filter.contains(q)) support.push_back(std::move(q));
  }
  return support;
}

}  // namespace

TEST_CASE("snapshot covers exactly the stored elements") {
  Filter filter = theory_filter(16, 8, 5);
  CHECK(snapshot_config(filter).size() == 0);
  filter.insert(key_from_u64(1));
  filter.insert(key_from_u64(2));
  ConfigSnapshot snap = snapshot_config(filter);
  CHECK(snap.size() == 2);
  CHECK(snap.at(key_from_u64(1)) == *filter.dict().lookup(key_from_u64(1)));
}

TEST_CASE("a fix that moves one element changes exactly one snapshot record") {
  Filter filter = theory_filter(64, 6, 7);
  Rng rng(8);
  const Element x = rng.random_key();
  filter.insert(x);
  const Location xloc = *filter.dict().lookup(x);
  const Element q = oracles::find_key([&](const Element& e) {
    return !filter.contains(e) &&
           filter.family().location(xloc.table, e) == xloc.bin &&
           filter.family().fingerprint(e, 0) == filter.family().fingerprint(x, 0);
  });
  ConfigSnapshot before = snapshot_config(filter);
  REQUIRE(filter.query(q));
  filter.fix(q);
  ConfigSnapshot after = snapshot_config(filter);
  CHECK(before.diff_count(after) == 1);
}

TEST_CASE("initial false positives exclude stored elements and empty-bin queries") {
  Filter filter = theory_filter(32, 8, 9);
  Rng rng(10);
  fill_random(filter, rng);
  std::vector<Element> support;
  filter.dict().for_each_sorted(
      [&](const Location&, const Element& e) { support.push_back(e); });
  CHECK(initial_false_positives(filter, support).empty());
}

TEST_CASE("mean |F0|/|Q| matches the target rate") {
  const size_t n = 1u << 14;
  const size_t q_count = 1u << 12;
  const int seeds = 60;
  double sum = 0.0;
  for (int s = 0; s < seeds; ++s) {
    Filter filter = theory_filter(n, 8, mix_seed(1100, s));
    Rng rng(mix_seed(1101, s));
    fill_random(filter, rng);
    std::vector<Element> support = random_support(filter, q_count, rng);
    sum += static_cast<double>(initial_false_positives(filter, support).size()) /
           static_cast<double>(q_count);
  }
  const double mean = sum / seeds;
  CHECK(mean > (1.0 / 256.0) * 0.85);
  CHECK(mean < (1.0 / 256.0) * 1.15);
}

TEST_CASE("potential: definition basics") {
  Filter filter = theory_filter(64, 6, 11);
  Rng rng(12);
  fill_random(filter, rng);

  SUBCASE("empty F0 gives zero potential") {
    PotentialState state;
    state.baseline = snapshot_config(filter);
    CHECK(compute_potential(state, filter) == 0);
  }

  SUBCASE("at the baseline, potential dominates |F0| and is repeatable") {
    Instrumentation instr(filter);
    instr.arm(random_support(filter, 512, rng));
    const int64_t phi = instr.potential();
    CHECK(phi >= static_cast<int64_t>(instr.state().initial_fps.size()));
    CHECK(instr.potential() == phi);
  }
}

TEST_CASE("potential is constant on a vanilla filter") {
  Filter filter(derive_params(256, 2, 1, 2.0, 4), Variant::vanilla, 13);
  Rng rng(14);
  fill_random(filter, rng);
  std::vector<Element> support = random_support(filter, 512, rng);
  PotentialState state;
  state.baseline = snapshot_config(filter);
  state.support = support;
  state.initial_fps = initial_false_positives(filter, support);
  const int64_t phi0 = compute_potential(state, filter);
  for (const Element& q : support)
    if (filter.query(q) && !filter.contains(q)) filter.fix(q);
  CHECK(compute_potential(state, filter) == phi0);
}

TEST_CASE("potential rejects a mismatched element set") {
  Filter filter = theory_filter(16, 8, 15);
  filter.insert(key_from_u64(1));
  PotentialState state;
  state.baseline = snapshot_config(filter);
  filter.insert(key_from_u64(2));
  CHECK_THROWS_AS(compute_potential(state, filter), consistency_error);
}

TEST_CASE("suffix property checker") {
  ConfigSnapshot c0;
  c0.label = "C0";
  c0.positions["a"] = Location{0, 1, 0};
  c0.positions["b"] = Location{1, 2, 0};
  c0.positions["c"] = Location{0, 3, 0};

  PathRecord rec;
  rec.config_label = "C_{i-1}";

  SUBCASE("length-one paths always pass") {
    rec.moves = {Move{"a", Location{1, 9, 0}, Location{0, 1, 0}}};
    CHECK(check_suffix_property(rec, c0));
  }
  SUBCASE("all elements at their baseline tables pass") {
    rec.moves = {Move{"a", Location{0, 1, 0}, Location{1, 5, 0}},
                 Move{"b", Location{1, 2, 0}, Location{0, 8, 0}}};
    CHECK(check_suffix_property(rec, c0));
  }
  SUBCASE("a baseline-position element after a diverged one fails") {
    rec.moves = {Move{"a", Location{1, 9, 0}, Location{0, 1, 0}},
                 Move{"b", Location{1, 2, 0}, Location{0, 8, 0}}};
    CHECK_FALSE(check_suffix_property(rec, c0));
  }
  SUBCASE("looped paths are out of scope") {
    rec.moves = {Move{"a", Location{0, 1, 0}, Location{1, 5, 0}},
                 Move{"a", Location{1, 5, 0}, Location{0, 1, 0}}};
    rec.looped = true;
    CHECK_THROWS_AS(check_suffix_property(rec, c0), contract_error);
  }
  SUBCASE("elements missing from the snapshot are a consistency error") {
    rec.moves = {Move{"zz", Location{0, 1, 0}, Location{1, 5, 0}}};
    CHECK_THROWS_AS(check_suffix_property(rec, c0), consistency_error);
  }
  SUBCASE("three-argument form validates against the pre-fix snapshot") {
    rec.moves = {Move{"a", Location{0, 1, 0}, Location{1, 5, 0}}};
    CHECK(check_suffix_property(rec, c0, c0));
  }
}

TEST_CASE("fuzzed fix paths all satisfy the suffix property") {
  audit::SuffixFuzzConfig cfg;
  cfg.n = 1u << 12;
  cfg.f = 2;
  cfg.seed = 2024;
  cfg.target_paths = 200000;
  audit::SuffixFuzzStats stats = audit::run_suffix_fuzz(cfg);
  CHECK(stats.paths >= cfg.target_paths);
  CHECK(stats.violations == 0);
}

TEST_CASE("loop statistics") {
  SUBCASE("no fixes, no loops") {
    CHECK(loop_rate({}).rate == 0.0);
  }
  SUBCASE("single-move paths never loop") {
    PathRecord rec;
    rec.moves = {Move{"a", Location{0, 1, 0}, Location{1, 5, 0}}};
    rec.looped = any_element_repeats(rec.moves);
    CHECK_FALSE(rec.looped);
    LoopStats st = loop_rate({rec});
    CHECK(st.paths == 1);
    CHECK(st.looped == 0);
  }
  SUBCASE("looped fixes stay rare at half load") {
    const size_t n = 1u << 14;
    size_t total_looped = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
      Filter filter = theory_filter(n, 8, mix_seed(3100, s));
      Rng rng(mix_seed(3101, s));
      fill_random(filter, rng);
      Instrumentation instr(filter);
      instr.arm({});
      for (size_t i = 0; i < n; ++i) {
        Element q = rng.random_key();
        if (!filter.contains(q) && filter.query(q)) filter.fix(q);
      }
      total_looped += loop_rate(instr.records()).looped;
    }
    CHECK(static_cast<double>(total_looped) / seeds < 50.0);
  }
}

TEST_CASE("replay on the baseline leaves the live filter untouched") {
  Filter filter = theory_filter(256, 4, 17);
  Rng rng(18);
  fill_random(filter, rng);
  Instrumentation instr(filter);
  instr.arm(random_support(filter, 64, rng));

  // find a false positive and replay it twice; live config must not move
  Element fp = oracles::find_key(
      [&](const Element& e) { return !filter.contains(e) && filter.query(e); });
  ConfigSnapshot before = snapshot_config(filter);
  auto recs1 = instr.replay_on_baseline(fp);
  auto recs2 = instr.replay_on_baseline(fp);
  CHECK(before.diff_count(snapshot_config(filter)) == 0);
  REQUIRE(recs1.size() == recs2.size());
  REQUIRE(!recs1.empty());
  CHECK(recs1[0].config_label == "C0");
  CHECK(recs1[0].moves.size() == recs2[0].moves.size());  // deterministic replay
}

TEST_CASE("run log rows carry per-query paths and export as CSV") {
  Filter filter = theory_filter(256, 3, 19);
  Rng rng(20);
  fill_random(filter, rng);
  Instrumentation instr(filter);
  instr.arm({});
  instr.enable_run_log(true);
  size_t fps = 0;
  for (int i = 0; i < 200; ++i) {
    Element q = rng.random_key();
    if (filter.contains(q)) continue;
    instr.begin_query(q);
    const bool fp = filter.query(q);
    if (fp) {
      filter.fix(q);
      ++fps;
    }
    instr.finish_query(fp);
  }
  CHECK(instr.run_log().size() == 200);
  std::ostringstream csv;
  instr.export_run_log_csv(csv);
  const std::string text = csv.str();
  CHECK(text.rfind("query_index,was_fp,path_len,looped,phi\n", 0) == 0);
  size_t lines = 0;
  for (char ch : text)
    if (ch == '\n') ++lines;
  CHECK(lines == 201);
  CHECK(fps > 0);
}

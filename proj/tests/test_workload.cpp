// Usable under the terms in the Apache License, Version 2.0.
#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "acf/workload.hpp"
#include "oracles.hpp"

using namespace acf;
using namespace acf::workload;

TEST_CASE("trace parsing") {
  SUBCASE("records keep order; keys intern by first occurrence") {
    std::istringstream in("a\nb\na\n");
    Trace t = parse_trace(in);
    CHECK(t.record_count() == 3);
    CHECK(t.unique_count() == 2);
    CHECK(t.key(t.records()[0]) == "a");
    CHECK(t.key(t.records()[1]) == "b");
    CHECK(t.key(t.records()[2]) == "a");
  }
  SUBCASE("empty stream is an empty trace") {
    std::istringstream in("");
    Trace t = parse_trace(in);
    CHECK(t.record_count() == 0);
    CHECK(t.unique_count() == 0);
  }
  SUBCASE("comments and blank lines are skipped") {
    std::istringstream in("# header\n\nkey1\n\n# trailing\nkey2\n");
    Trace t = parse_trace(in);
    CHECK(t.record_count() == 2);
    CHECK(t.unique_count() == 2);
  }
}

TEST_CASE("zipf trace generation") {
  SUBCASE("same config twice is byte-identical") {
    ZipfConfig cfg{100, 5000, 1.1, 99};
    Trace a = generate_zipf_trace(cfg);
    Trace b = generate_zipf_trace(cfg);
    REQUIRE(a.record_count() == b.record_count());
    for (size_t i = 0; i < a.records().size(); ++i)
      CHECK(a.key(a.records()[i]) == b.key(b.records()[i]));
  }
  SUBCASE("one flow means one key") {
    Trace t = generate_zipf_trace(ZipfConfig{1, 50, 1.0, 3});
    CHECK(t.unique_count() == 1);
    CHECK(t.record_count() == 50);
  }
  SUBCASE("a vanishing exponent is near-uniform") {
    Trace t = generate_zipf_trace(ZipfConfig{100, 100000, 0.01, 7});
    std::vector<size_t> counts(t.unique_count(), 0);
    for (uint32_t id : t.records()) ++counts[id];
    const size_t mx = *std::max_element(counts.begin(), counts.end());
    const size_t mn = *std::min_element(counts.begin(), counts.end());
    CHECK(mn > 0);
    CHECK(static_cast<double>(mx) / static_cast<double>(mn) < 3.0);
  }
  SUBCASE("bad configs are rejected") {
    CHECK_THROWS_AS(generate_zipf_trace(ZipfConfig{0, 10, 1.0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(generate_zipf_trace(ZipfConfig{10, 5, 1.0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(generate_zipf_trace(ZipfConfig{10, 20, 0.0, 1}), std::invalid_argument);
  }
}

TEST_CASE("experiment split") {
  // 1000 unique flows, each seen once
  Trace t;
  for (int i = 0; i < 1000; ++i) t.append("flow" + std::to_string(i));

  SUBCASE("ratio 1 halves the uniques") {
    ExperimentPlan plan = build_experiment(t, 1.0);
    CHECK(plan.n == 500);
    CHECK(plan.query_stream.size() == 500);
    CHECK(plan.a_count == 500);
    for (uint32_t id : plan.query_stream) CHECK(id >= plan.n);
  }
  SUBCASE("a ratio that leaves no queries is an error") {
    CHECK_THROWS_AS(build_experiment(t, 0.0), std::invalid_argument);
  }
  SUBCASE("a ratio that leaves no stored set is an error") {
    CHECK_THROWS_AS(build_experiment(t, 2000.0), std::invalid_argument);
  }
}

TEST_CASE("default roster covers the six benchmark filters") {
  auto roster = default_roster(8);
  REQUIRE(roster.size() == 6);
  CHECK(roster[0].name == "vanilla");
  CHECK(roster[1].name == "cuckooing");
  CHECK(roster[2].name == "cyclic-s1");
  CHECK(roster[2].f == 7);  // selector bits are paid for in fingerprint bits
  CHECK(roster[3].f == 6);
  CHECK(roster[4].f == 5);
  CHECK(roster[5].name == "swapping");
  CHECK(roster[5].b == 4);
  CHECK(roster[5].k == 2);
}

TEST_CASE("vanilla experiment rate matches the target on distinct random keys") {
  // synthetic trace: n stored keys once each, then distinct query keys
  Trace t;
  const size_t n = 4096, queries = 120000;
  for (size_t i = 0; i < n; ++i) t.append("s" + std::to_string(i));
  for (size_t i = 0; i < queries; ++i) t.append("q" + std::to_string(i));
  const double ratio = static_cast<double>(queries) / n;
  ExperimentPlan plan = build_experiment(t, ratio);
  REQUIRE(plan.n == n);
  REQUIRE(plan.query_stream.size() == queries);

  std::vector<FilterSpec> specs = {{"vanilla", Variant::vanilla, 4, 1, 8, 0}};
  auto rows = run_experiment(plan, specs, 4, 515, "unit");
  double mean = 0.0;
  for (const auto& row : rows) {
    mean += row.fp_rate;
    CHECK(row.fp_rate == doctest::Approx(static_cast<double>(row.fp_count) /
                                         static_cast<double>(row.query_count)));
    CHECK(row.rebuilds == 0);
  }
  mean /= static_cast<double>(rows.size());
  const double target = 4.0 * 0.95 / 256.0;
  CHECK(mean > target * 0.9);
  CHECK(mean < target * 1.1);
}

TEST_CASE("a single repeated query is fixed once by cuckooing, never by vanilla") {
  // n unique keys then 1e5 repetitions of one more key; ratio 1/n makes the
  // stored set exactly the first n uniques.
  const size_t n = 1u << 14;
  Trace t;
  for (size_t i = 0; i < n; ++i) t.append("s" + std::to_string(i));
  for (size_t i = 0; i < 100000; ++i) t.append("theq");
  ExperimentPlan plan = build_experiment(t, 1.0 / static_cast<double>(n));
  REQUIRE(plan.n == n);
  REQUIRE(plan.a_count == 1);

  std::vector<FilterSpec> specs = {{"vanilla", Variant::vanilla, 2, 1, 8, 0},
                                   {"cuckooing", Variant::cuckooing, 2, 1, 8, 0}};
  // base seed chosen so at least one trial starts with the query colliding
  auto rows = run_experiment(plan, specs, 10, 9100, "unit", 0.5);
  double vanilla_mean = 0.0, cuckooing_mean = 0.0;
  for (const auto& row : rows) {
    if (row.filter_name == "vanilla")
      vanilla_mean += static_cast<double>(row.fp_count);
    else
      cuckooing_mean += static_cast<double>(row.fp_count);
  }
  vanilla_mean /= 10.0;
  cuckooing_mean /= 10.0;
  CHECK(cuckooing_mean <= 10.0);
  CHECK(cuckooing_mean <= vanilla_mean);
}

TEST_CASE("run_experiment is reproducible bit for bit") {
  Trace t = generate_zipf_trace(ZipfConfig{500, 20000, 1.1, 11});
  ExperimentPlan plan = build_experiment(t, 3.0);
  auto specs = default_roster(8);
  auto rows1 = run_experiment(plan, specs, 2, 77, "repro");
  auto rows2 = run_experiment(plan, specs, 2, 77, "repro");
  std::ostringstream a, b;
  write_results_csv(a, rows1);
  write_results_csv(b, rows2);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("dataset,filter,k,b,f,s,ratio,trial,seed,n,query_count,fp_count,"
                      "fp_rate,rebuilds,dict_accesses\n",
                      0) == 0);
}

TEST_CASE("trace round trip through the file format") {
  Trace t = generate_zipf_trace(ZipfConfig{64, 2000, 1.2, 5});
  std::ostringstream out;
  write_trace(out, t, "unit test trace");
  std::istringstream in(out.str());
  Trace back = parse_trace(in);
  REQUIRE(back.record_count() == t.record_count());
  CHECK(back.unique_count() == t.unique_count());
  for (size_t i = 0; i < t.records().size(); ++i)
    CHECK(back.key(back.records()[i]) == t.key(t.records()[i]));
}

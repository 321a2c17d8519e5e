// Usable under the terms in the Apache License, Version 2.0.
//
// Trace ingestion, synthetic skewed-trace generation, and the benchmark
// protocol: split the trace's unique flows into a stored set and a query
// stream by the |A|/|S| ratio, insert the stored set, replay the queries in
// trace order, and fix every false positive with the variant's fix.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "acf/element.hpp"
#include "acf/filter.hpp"

namespace acf {
namespace workload {

// Keys interned by first occurrence: flow id i is the (i+1)-th distinct key
// seen, so the first n unique flows are exactly ids [0, n).
class Trace {
 public:
  void append(const Element& key);

  size_t record_count() const { return records_.size(); }
  size_t unique_count() const { return keys_.size(); }
  const std::vector<uint32_t>& records() const { return records_; }
  const Element& key(uint32_t id) const { return keys_[id]; }

 private:
  std::vector<uint32_t> records_;
  std::vector<Element> keys_;
  std::unordered_map<Element, uint32_t> ids_;
};

// One key per line; blank lines and '#' comment lines are skipped.
Trace parse_trace(std::istream& in);
Trace parse_trace_file(const std::string& path);
void write_trace(std::ostream& out, const Trace& trace, const std::string& header);

struct ZipfConfig {
  uint32_t num_flows = 0;
  size_t trace_length = 0;
  double exponent = 1.0;  // > 0
  uint64_t seed = 0;
};

// trace_length records over num_flows keys with Zipf(exponent) frequency
// ranks; which flows are heavy is randomized by the seed. Deterministic.
Trace generate_zipf_trace(const ZipfConfig& cfg);

struct ExperimentPlan {
  double ratio = 0.0;                 // |A|/|S|
  size_t n = 0;                       // floor(unique/(1+ratio))
  const Trace* trace = nullptr;
  std::vector<uint32_t> query_stream;  // records with key outside S, in order
  size_t a_count = 0;                  // distinct query keys |A|
};

ExperimentPlan build_experiment(const Trace& trace, double ratio);

struct FilterSpec {
  std::string name;
  Variant variant = Variant::vanilla;
  uint32_t k = 0, b = 0, f = 0, s = 0;
};

// The six benchmark filters at a given fingerprint budget f: vanilla and
// cuckooing (k=4, b=1, f), cyclic s=1..3 (k=4, b=1, f-s fingerprint bits so
// each selector bit is paid for), swapping (k=2, b=4, f).
std::vector<FilterSpec> default_roster(uint32_t f);

struct ResultRow {
  std::string dataset;
  std::string filter_name;
  uint32_t k = 0, b = 0, f = 0, s = 0;
  double ratio = 0.0;
  uint32_t trial = 0;
  uint64_t seed = 0;
  size_t n = 0;
  size_t query_count = 0;
  size_t fp_count = 0;
  double fp_rate = 0.0;
  uint64_t rebuilds = 0;
  uint64_t dict_accesses = 0;
};

// Per (spec, trial): build a filter seeded by mix(base_seed, trial), insert
// the stored set, stream the queries, count and fix false positives
// (vanilla: no fix). Trials run across a worker pool; rows come back sorted
// by (spec, trial) so output is reproducible bit for bit.
std::vector<ResultRow> run_experiment(const ExperimentPlan& plan,
                                      const std::vector<FilterSpec>& specs,
                                      uint32_t trials, uint64_t base_seed,
                                      const std::string& dataset_label,
                                      double occupancy = 0.95, size_t threads = 0);

// dataset,filter,k,b,f,s,ratio,trial,seed,n,query_count,fp_count,fp_rate,rebuilds,dict_accesses
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);

// Thread cap: min(jobs, hardware, ACF_THREADS env when set, explicit cap).
size_t resolve_threads(size_t jobs, size_t cap = 0);

}  // namespace workload
}  // namespace acf

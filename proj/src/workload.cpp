// Usable under the terms in the Apache License, Version 2.0.
#include "acf/workload.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "acf/params.hpp"
#include "acf/rng.hpp"

namespace acf {
namespace workload {

void Trace::append(const Element& key) {
  auto [it, fresh] = ids_.try_emplace(key, static_cast<uint32_t>(keys_.size()));
  if (fresh) keys_.push_back(key);
  records_.push_back(it->second);
}

Trace parse_trace(std::istream& in) {
  Trace trace;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    trace.append(line);
  }
  if (in.bad()) throw std::runtime_error("trace: stream read error");
  return trace;
}

Trace parse_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("trace: cannot open " + path);
  return parse_trace(in);
}

void write_trace(std::ostream& out, const Trace& trace, const std::string& header) {
  if (!header.empty()) out << "# " << header << '\n';
  for (uint32_t id : trace.records()) out << trace.key(id) << '\n';
}

Trace generate_zipf_trace(const ZipfConfig& cfg) {
  if (cfg.num_flows < 1) throw std::invalid_argument("zipf: need at least one flow");
  if (cfg.trace_length < cfg.num_flows)
    throw std::invalid_argument("zipf: trace_length must be >= num_flows");
  if (!(cfg.exponent > 0.0)) throw std::invalid_argument("zipf: exponent must be > 0");

  Rng rng(cfg.seed);
  // Rank r gets weight (r+1)^-a; which flow id owns each rank is shuffled.
  std::vector<uint32_t> flow_of_rank(cfg.num_flows);
  for (uint32_t i = 0; i < cfg.num_flows; ++i) flow_of_rank[i] = i;
  std::shuffle(flow_of_rank.begin(), flow_of_rank.end(), rng.engine());

  std::vector<double> cdf(cfg.num_flows);
  double acc = 0.0;
  for (uint32_t r = 0; r < cfg.num_flows; ++r) {
    acc += std::pow(static_cast<double>(r + 1), -cfg.exponent);
    cdf[r] = acc;
  }

  // Per-rank record counts from iid sampling.
  std::vector<size_t> count(cfg.num_flows, 0);
  for (size_t i = 0; i < cfg.trace_length; ++i) {
    const double u = rng.unit() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    ++count[std::min<ptrdiff_t>(it - cdf.begin(), cfg.num_flows - 1)];
  }

  // Flows behave like network flows: each arrives at a random time and emits
  // its records inside a bounded activity window. Arrival order is
  // independent of frequency rank, so the first n unique flows of the trace
  // are a random flow subset rather than the heavy ranks; a flow's repeats
  // cluster in time the way packet trains do. Window sizes are scaled so a
  // bounded number of flows is active at any instant.
  const double concurrency =
      std::min<double>(cfg.num_flows, std::max<double>(64.0, cfg.num_flows / 16.0));
  struct Stamp {
    double t;
    uint32_t flow;
    uint32_t tie;
  };
  std::vector<Stamp> stamps;
  stamps.reserve(cfg.trace_length);
  for (uint32_t r = 0; r < cfg.num_flows; ++r) {
    if (count[r] == 0) continue;
    const uint32_t flow = flow_of_rank[r];
    const double arrival = rng.unit();
    const double window = std::min(
        1.0 - arrival, static_cast<double>(count[r]) * concurrency /
                           static_cast<double>(cfg.trace_length));
    stamps.push_back({arrival, flow, 0});
    for (size_t j = 1; j < count[r]; ++j) {
      const double t = arrival + rng.unit() * window;
      stamps.push_back({t, flow, static_cast<uint32_t>(j)});
    }
  }
  std::sort(stamps.begin(), stamps.end(), [](const Stamp& a, const Stamp& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.flow != b.flow) return a.flow < b.flow;
    return a.tie < b.tie;
  });

  Trace trace;
  for (const Stamp& s : stamps) trace.append(std::to_string(s.flow));
  return trace;
}

ExperimentPlan build_experiment(const Trace& trace, double ratio) {
  if (!(ratio >= 0.0)) throw std::invalid_argument("experiment: ratio must be >= 0");
  ExperimentPlan plan;
  plan.ratio = ratio;
  plan.trace = &trace;
  plan.n = static_cast<size_t>(std::floor(
      static_cast<double>(trace.unique_count()) / (1.0 + ratio) + 1e-9));
  if (plan.n < 1)
    throw std::invalid_argument("experiment: ratio leaves no room for a stored set");
  uint32_t max_id = 0;
  for (uint32_t id : trace.records()) {
    if (id < plan.n) continue;  // key belongs to S; skipped entirely
    plan.query_stream.push_back(id);
    max_id = std::max(max_id, id);
  }
  if (plan.query_stream.empty())
    throw std::invalid_argument("experiment: ratio leaves no queries");
  std::vector<bool> seen(max_id + 1, false);
  for (uint32_t id : plan.query_stream) seen[id] = true;
  plan.a_count = static_cast<size_t>(std::count(seen.begin(), seen.end(), true));
  return plan;
}

std::vector<FilterSpec> default_roster(uint32_t f) {
  if (f < 4) throw std::invalid_argument("roster: need at least 4 fingerprint bits");
  std::vector<FilterSpec> specs;
  specs.push_back({"vanilla", Variant::vanilla, 4, 1, f, 0});
  specs.push_back({"cuckooing", Variant::cuckooing, 4, 1, f, 0});
  for (uint32_t s = 1; s <= 3; ++s)
    specs.push_back({"cyclic-s" + std::to_string(s), Variant::cyclic, 4, 1, f - s, s});
  specs.push_back({"swapping", Variant::swapping, 2, 4, f, 0});
  return specs;
}

size_t resolve_threads(size_t jobs, size_t cap) {
  size_t n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("ACF_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = std::min<size_t>(n, static_cast<size_t>(v));
  }
  if (cap > 0) n = std::min(n, cap);
  return std::max<size_t>(1, std::min(n, jobs));
}

namespace {

ResultRow run_one_trial(const ExperimentPlan& plan, const FilterSpec& spec,
                        uint32_t trial, uint64_t seed, const std::string& dataset,
                        double occupancy) {
  const Trace& trace = *plan.trace;
  FilterParams params = derive_params(plan.n, spec.k, spec.b,
                                      gamma_from_occupancy(occupancy), spec.f, spec.s);
  Filter filter(params, spec.variant, seed);
  for (uint32_t id = 0; id < plan.n; ++id) {
    const InsertResult res = filter.insert(trace.key(id));
    if (res != InsertResult::stored && res != InsertResult::stored_after_rebuild)
      throw consistency_error("experiment: stored-set insert failed unexpectedly");
  }

  size_t fps = 0;
  for (uint32_t id : plan.query_stream) {
    const Element& q = trace.key(id);
    if (!filter.query(q)) continue;
    // present: consult the dictionary as the remote store would be
    if (filter.contains(q)) continue;
    ++fps;
    if (spec.variant != Variant::vanilla) filter.fix(q);
  }

  ResultRow row;
  row.dataset = dataset;
  row.filter_name = spec.name;
  row.k = spec.k;
  row.b = spec.b;
  row.f = spec.f;
  row.s = spec.s;
  row.ratio = plan.ratio;
  row.trial = trial;
  row.seed = seed;
  row.n = plan.n;
  row.query_count = plan.query_stream.size();
  row.fp_count = fps;
  row.fp_rate = static_cast<double>(fps) / static_cast<double>(row.query_count);
  row.rebuilds = filter.rebuild_count();
  row.dict_accesses = filter.dict().access_count();
  return row;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentPlan& plan,
                                      const std::vector<FilterSpec>& specs,
                                      uint32_t trials, uint64_t base_seed,
                                      const std::string& dataset_label,
                                      double occupancy, size_t threads) {
  if (trials < 1) throw std::invalid_argument("experiment: need at least one trial");
  const size_t jobs = specs.size() * trials;
  std::vector<ResultRow> rows(jobs);
  const size_t workers = resolve_threads(jobs, threads);

  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mu;
  auto work = [&]() {
    for (;;) {
      const size_t j = next.fetch_add(1);
      if (j >= jobs || failed.load()) return;
      const FilterSpec& spec = specs[j / trials];
      const uint32_t trial = static_cast<uint32_t>(j % trials);
      const uint64_t seed = mix_seed(base_seed, trial);
      try {
        rows[j] = run_one_trial(plan, spec, trial, seed, dataset_label, occupancy);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(error_mu);
        failed.store(true);
        if (error.empty()) error = e.what();
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failed.load()) throw std::runtime_error("experiment trial failed: " + error);
  return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "dataset,filter,k,b,f,s,ratio,trial,seed,n,query_count,fp_count,fp_rate,"
         "rebuilds,dict_accesses\n";
  char buf[64];
  for (const ResultRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.10g", r.ratio);
    out << r.dataset << ',' << r.filter_name << ',' << r.k << ',' << r.b << ',' << r.f
        << ',' << r.s << ',' << buf << ',' << r.trial << ',' << r.seed << ',' << r.n
        << ',' << r.query_count << ',' << r.fp_count << ',';
    std::snprintf(buf, sizeof(buf), "%.10g", r.fp_rate);
    out << buf << ',' << r.rebuilds << ',' << r.dict_accesses << '\n';
  }
}

}  // namespace workload
}  // namespace acf

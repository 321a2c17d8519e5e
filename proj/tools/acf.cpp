// Usable under the terms in the Apache License, Version 2.0.
//
// Command-line harness: trace-driven benchmarks over the filter roster,
// the three attack strategies, synthetic trace generation, and the
// invariant fuzz suites.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acf/adversary.hpp"
#include "acf/audit.hpp"
#include "acf/errors.hpp"
#include "acf/params.hpp"
#include "acf/workload.hpp"

namespace {

using namespace acf;

std::vector<double> parse_ratio_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size() || !(v > 0.0))
      throw std::invalid_argument("bad ratio entry: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty ratio list");
  return out;
}

const std::vector<double> kDefaultRatios = {1,  3,  5,  10, 20, 30, 40,
                                            50, 60, 70, 80, 90, 100};

struct BenchOptions {
  bool synthetic = false;
  std::string trace_path;
  uint32_t flows = 20000;
  size_t length = 2000000;
  double zipf = 1.1;
  std::string ratios;
  uint32_t fbits = 8;
  double occupancy = 0.95;
  uint32_t trials = 10;
  uint64_t seed = 1;
  std::string out_path;
  size_t threads = 0;
};

int run_bench(const BenchOptions& opt) {
  workload::Trace trace;
  std::string dataset;
  if (opt.synthetic) {
    workload::ZipfConfig cfg{opt.flows, opt.length, opt.zipf, mix_seed(opt.seed, 0x7a)};
    trace = workload::generate_zipf_trace(cfg);
    std::ostringstream label;
    label << "zipf(flows=" << opt.flows << ",len=" << opt.length << ",a=" << opt.zipf
          << ")";
    dataset = label.str();
  } else {
    trace = workload::parse_trace_file(opt.trace_path);
    dataset = opt.trace_path;
  }
  std::cerr << "trace: " << trace.record_count() << " records, "
            << trace.unique_count() << " unique flows\n";

  std::vector<double> ratios;
  bool ratios_explicit = !opt.ratios.empty();
  ratios = ratios_explicit ? parse_ratio_list(opt.ratios) : kDefaultRatios;

  const auto roster = workload::default_roster(opt.fbits);
  std::vector<workload::ResultRow> all_rows;
  for (double r : ratios) {
    // The default ratio list truncates once the split degenerates; an
    // explicitly requested ratio must work or the run is an error.
    const double n_est = static_cast<double>(trace.unique_count()) / (1.0 + r);
    if (!ratios_explicit && n_est < 1.0) {
      std::cerr << "ratio " << r << ": skipped (no room for a stored set)\n";
      continue;
    }
    workload::ExperimentPlan plan = workload::build_experiment(trace, r);
    auto rows = workload::run_experiment(plan, roster, opt.trials, opt.seed, dataset,
                                         opt.occupancy, opt.threads);
    all_rows.insert(all_rows.end(), rows.begin(), rows.end());

    for (const auto& spec : roster) {
      double mean = 0.0;
      for (const auto& row : rows)
        if (row.filter_name == spec.name) mean += row.fp_rate;
      mean /= opt.trials;
      std::fprintf(stderr, "  ratio %-6g %-10s fp_rate %.6f\n", r, spec.name.c_str(),
                   mean);
    }
  }
  if (all_rows.empty()) throw std::invalid_argument("no ratio produced a valid split");

  std::ofstream out(opt.out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + opt.out_path);
  workload::write_results_csv(out, all_rows);
  std::cerr << "wrote " << all_rows.size() << " rows to " << opt.out_path << "\n";
  return 0;
}

struct AttackOptions {
  std::string variant;
  size_t n = 4096;
  uint32_t fbits = 4;
  uint32_t k = 2;
  uint32_t s = 1;
  uint32_t b = 2;
  uint32_t trials = 50;
  uint64_t seed = 1;
  double budget_mult = 8.0;
  uint32_t c_qd = 4;
  std::string out_path;
};

int run_attack(const AttackOptions& opt) {
  std::vector<AttackRow> rows;
  size_t wins = 0, found = 0;
  double mean_queries = 0.0;

  for (uint32_t trial = 0; trial < opt.trials; ++trial) {
    const uint64_t seed = mix_seed(opt.seed, trial);
    Rng rng(mix_seed(seed, 0xad));

    Filter filter = [&]() -> Filter {
      if (opt.variant == "cyclic") {
        // N = n per table: gamma = k for b = 1.
        FilterParams p = derive_params(opt.n, opt.k, 1, static_cast<double>(opt.k),
                                       opt.fbits, opt.s);
        return Filter(p, Variant::cyclic, seed);
      }
      if (opt.variant == "swapping") {
        FilterParams p = derive_params(opt.n, 2, opt.b, 2.0, opt.fbits, 0);
        return Filter(p, Variant::swapping, seed);
      }
      if (opt.variant == "round-robin") {
        FilterParams p = derive_params(opt.n, opt.k, 1, static_cast<double>(opt.k),
                                       opt.fbits, 0);
        return Filter(p, Variant::cuckooing, seed);
      }
      throw std::invalid_argument("unknown attack variant: " + opt.variant);
    }();

    while (filter.size() < filter.capacity()) filter.insert(rng.random_key());

    AttackOutcome outcome;
    if (opt.variant == "cyclic") {
      outcome = attack_cyclic(filter, opt.budget_mult, rng);
    } else if (opt.variant == "swapping") {
      outcome = attack_swapping(filter, opt.budget_mult, rng);
    } else {
      outcome = attack_round_robin(filter, opt.c_qd, rng);
    }

    rows.push_back(AttackRow{trial, seed, outcome.kind, outcome.queries_used,
                             outcome.qd_size, outcome.win});
    wins += outcome.win ? 1 : 0;
    found += outcome.kind == AttackOutcome::Kind::found ? 1 : 0;
    mean_queries += static_cast<double>(outcome.queries_used);
  }
  mean_queries /= opt.trials;

  std::printf("variant=%s trials=%u found=%zu wins=%zu win_rate=%.4f mean_queries=%.1f\n",
              opt.variant.c_str(), opt.trials, found, wins,
              static_cast<double>(wins) / opt.trials, mean_queries);
  if (!opt.out_path.empty()) {
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + opt.out_path);
    write_attack_csv(out, rows);
  }
  return 0;
}

struct GenTraceOptions {
  uint32_t flows = 20000;
  size_t length = 2000000;
  double zipf = 1.1;
  uint64_t seed = 1;
  std::string out_path;
};

int run_gen_trace(const GenTraceOptions& opt) {
  workload::ZipfConfig cfg{opt.flows, opt.length, opt.zipf, opt.seed};
  workload::Trace trace = workload::generate_zipf_trace(cfg);
  std::ofstream out(opt.out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + opt.out_path);
  std::ostringstream header;
  header << "acf-trace flows=" << opt.flows << " length=" << opt.length
         << " zipf=" << opt.zipf << " seed=" << opt.seed;
  workload::write_trace(out, trace, header.str());
  std::cerr << "wrote " << trace.record_count() << " records ("
            << trace.unique_count() << " unique) to " << opt.out_path << "\n";
  return 0;
}

struct AuditOptions {
  size_t ops = 200000;
  size_t suffix_paths = 50000;
  uint64_t seed = 1;
};

int run_audit(const AuditOptions& opt) {
  audit::FuzzStats total;
  for (const auto& cfg : audit::variant_roster(opt.seed, opt.ops)) {
    audit::FuzzStats stats = audit::run_fuzz(cfg);
    std::printf("fuzz %-10s ops=%zu inserts=%zu queries=%zu fixes=%zu rebuilds=%zu "
                "violations=%zu\n",
                variant_name(cfg.variant), stats.ops, stats.inserts, stats.queries,
                stats.fixes, stats.rebuilds, stats.violations);
    total.merge(stats);
  }

  audit::SuffixFuzzConfig scfg;
  scfg.seed = opt.seed;
  scfg.target_paths = opt.suffix_paths;
  audit::SuffixFuzzStats sstats = audit::run_suffix_fuzz(scfg);
  std::printf("suffix-fuzz paths=%zu looped=%zu violations=%zu\n", sstats.paths,
              sstats.looped, sstats.violations);

  for (const auto& f : total.failures) std::fprintf(stderr, "violation: %s\n", f.c_str());
  if (total.violations != 0 || sstats.violations != 0) {
    std::fprintf(stderr, "audit FAILED: %zu violations\n",
                 total.violations + sstats.violations);
    return 1;
  }
  std::printf("audit passed\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive cuckoo filter benchmark and attack harness"};
  app.require_subcommand(1);

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "replay a trace through the filter roster");
  auto* synth = bench_cmd->add_flag("--synthetic", bench.synthetic,
                                    "generate a synthetic zipf trace in memory");
  auto* trace_opt =
      bench_cmd->add_option("--trace", bench.trace_path, "newline-delimited key file");
  synth->excludes(trace_opt);
  bench_cmd->add_option("--flows", bench.flows, "synthetic: distinct flows");
  bench_cmd->add_option("--length", bench.length, "synthetic: trace length");
  bench_cmd->add_option("--zipf", bench.zipf, "synthetic: zipf exponent");
  bench_cmd->add_option("--ratios", bench.ratios,
                        "comma-separated |A|/|S| ratios (default: paper set)");
  bench_cmd->add_option("--fbits", bench.fbits, "fingerprint bits");
  bench_cmd->add_option("--occupancy", bench.occupancy, "target occupancy in (0,1)");
  bench_cmd->add_option("--trials", bench.trials, "trials per configuration");
  bench_cmd->add_option("--seed", bench.seed, "base seed");
  bench_cmd->add_option("--out", bench.out_path, "results CSV path")->required();
  bench_cmd->add_option("--threads", bench.threads, "worker cap (0 = auto)");

  AttackOptions attack;
  auto* attack_cmd = app.add_subcommand("attack", "run an adversary strategy");
  attack_cmd
      ->add_option("--variant", attack.variant, "cyclic | swapping | round-robin")
      ->required()
      ->check(CLI::IsMember({"cyclic", "swapping", "round-robin"}));
  attack_cmd->add_option("--n", attack.n, "stored elements");
  attack_cmd->add_option("--fbits", attack.fbits, "fingerprint bits");
  attack_cmd->add_option("--k", attack.k, "hash tables");
  attack_cmd->add_option("--s", attack.s, "selector bits (cyclic)");
  attack_cmd->add_option("--b", attack.b, "slots per bin (swapping)");
  attack_cmd->add_option("--trials", attack.trials, "independent trials");
  attack_cmd->add_option("--seed", attack.seed, "base seed");
  attack_cmd->add_option("--budget-mult", attack.budget_mult,
                         "candidate budget multiplier (cyclic/swapping)");
  attack_cmd->add_option("--c-qd", attack.c_qd, "|Q_d| cap multiplier (round-robin)");
  attack_cmd->add_option("--out", attack.out_path, "transcript CSV path");

  GenTraceOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-trace", "write a synthetic zipf trace file");
  gen_cmd->add_option("--flows", gen.flows, "distinct flows");
  gen_cmd->add_option("--length", gen.length, "records");
  gen_cmd->add_option("--zipf", gen.zipf, "zipf exponent");
  gen_cmd->add_option("--seed", gen.seed, "seed");
  gen_cmd->add_option("--out", gen.out_path, "output path")->required();

  AuditOptions audit_opt;
  auto* audit_cmd = app.add_subcommand("audit", "run the invariant fuzz suites");
  audit_cmd->add_option("--ops", audit_opt.ops, "total mixed operations");
  audit_cmd->add_option("--suffix-paths", audit_opt.suffix_paths,
                        "fix paths for the suffix-property fuzz");
  audit_cmd->add_option("--seed", audit_opt.seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (bench_cmd->parsed()) {
      if (!bench.synthetic && bench.trace_path.empty())
        throw std::invalid_argument("bench needs --synthetic or --trace");
      return run_bench(bench);
    }
    if (attack_cmd->parsed()) return run_attack(attack);
    if (gen_cmd->parsed()) return run_gen_trace(gen);
    if (audit_cmd->parsed()) return run_audit(audit_opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

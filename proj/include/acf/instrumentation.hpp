// Usable under the terms in the Apache License, Version 2.0.
//
// Analysis objects for the cuckooing filter: baseline configuration
// snapshots, initial false positives of a query support, the potential
// counter over (stored element, initial false positive) colliding pairs, and
// per-execution fix path records with loop detection and the suffix
// property check. Opt-in: benchmarks run with the hook detached.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "acf/filter.hpp"

namespace acf {

struct ConfigSnapshot {
  std::string label;
  std::unordered_map<Element, Location> positions;

  size_t size() const { return positions.size(); }
  const Location& at(const Element& e) const;
  // Number of elements whose position differs (or that exist on one side only).
  size_t diff_count(const ConfigSnapshot& other) const;
};

ConfigSnapshot snapshot_config(const Filter& filter, std::string label = "C0");

// Queries in support that are false positives under the filter's current
// configuration. Pure: performs no fixes. Stored elements are excluded by
// definition.
std::vector<Element> initial_false_positives(const Filter& filter,
                                             const std::vector<Element>& support);

struct PotentialState {
  ConfigSnapshot baseline;             // C0
  std::vector<Element> initial_fps;    // F0, subset of support
  std::vector<Element> support;        // Q
};

// Counts pairs (x, q in F0) where x collides with q under the current
// configuration and x still sits at its baseline hash index.
int64_t compute_potential(const PotentialState& state, const Filter& filter);

// One fixing-function execution recorded against the configuration it ran on.
struct PathRecord {
  size_t query_index = 0;
  std::string config_label;  // "C_{i-1}" for live fixes, "C0" for replays
  std::vector<Move> moves;
  bool looped = false;
  bool rebuilt = false;

  size_t length() const { return moves.size(); }
};

// Once a moved element's pre-move table differs from its baseline table,
// every later element on the path must differ too. Throws contract_error on
// looped paths (caller filters those) and consistency_error when a moved
// element is missing from the snapshot.
bool check_suffix_property(const PathRecord& path, const ConfigSnapshot& baseline);

// Same check; additionally verifies the moved elements exist in the pre-fix
// snapshot.
bool check_suffix_property(const PathRecord& path, const ConfigSnapshot& baseline,
                           const ConfigSnapshot& pre_fix);

struct LoopStats {
  size_t paths = 0;
  size_t looped = 0;
  double rate = 0.0;
};

LoopStats loop_rate(const std::vector<PathRecord>& records);

struct RunLogRow {
  size_t query_index = 0;
  bool was_fp = false;
  size_t path_len = 0;
  bool looped = false;
  int64_t phi = 0;
};

// Binds to one filter; collects path records for every fix execution between
// arm() and detach. Also keeps a clone of the baseline configuration so
// queries can be replayed counterfactually.
class Instrumentation final : public FixObserver {
 public:
  explicit Instrumentation(Filter& filter) : filter_(&filter) {}
  ~Instrumentation() override { detach(); }

  Instrumentation(const Instrumentation&) = delete;
  Instrumentation& operator=(const Instrumentation&) = delete;

  // Snapshot the current configuration as the baseline, evaluate the initial
  // false positives of support, and start recording fix paths.
  void arm(const std::vector<Element>& support);
  void detach();

  // Per-query bookkeeping for the run log. begin_query advances the query
  // index; finish_query records the row (and the potential, when enabled).
  void begin_query(const Element& q);
  void finish_query(bool was_fp);
  void enable_run_log(bool with_potential);

  int64_t potential() const { return compute_potential(state_, *filter_); }
  const PotentialState& state() const { return state_; }
  const std::vector<PathRecord>& records() const { return records_; }
  const std::vector<RunLogRow>& run_log() const { return run_log_; }
  size_t query_index() const { return query_index_; }

  // Clone the baseline filter and replay q on the clone; the live filter is
  // untouched. Returns the clone's fix paths labeled "C0".
  std::vector<PathRecord> replay_on_baseline(const Element& q) const;

  // (query_index, was_fp, path_len, looped, phi) rows.
  void export_run_log_csv(std::ostream& out) const;

  void on_fix_execution(const FixExecution& exec) override;

 private:
  Filter* filter_ = nullptr;
  PotentialState state_;
  std::optional<Filter> baseline_clone_;
  std::vector<PathRecord> records_;
  std::vector<RunLogRow> run_log_;
  size_t query_index_ = 0;
  size_t moves_this_query_ = 0;
  bool looped_this_query_ = false;
  bool armed_ = false;
  bool log_rows_ = false;
  bool log_phi_ = false;
};

}  // namespace acf

// Usable under the terms in the Apache License, Version 2.0.
#include "acf/instrumentation.hpp"

#include <ostream>

namespace acf {

const Location& ConfigSnapshot::at(const Element& e) const {
  auto it = positions.find(e);
  if (it == positions.end())
    throw consistency_error("snapshot: element not covered: " + label);
  return it->second;
}

size_t ConfigSnapshot::diff_count(const ConfigSnapshot& other) const {
  size_t diffs = 0;
  for (const auto& [e, loc] : positions) {
    auto it = other.positions.find(e);
    if (it == other.positions.end() || !(it->second == loc)) ++diffs;
  }
  for (const auto& [e, loc] : other.positions)
    if (positions.find(e) == positions.end()) ++diffs;
  return diffs;
}

ConfigSnapshot snapshot_config(const Filter& filter, std::string label) {
  ConfigSnapshot snap;
  snap.label = std::move(label);
  snap.positions.reserve(filter.size());
  filter.dict().for_each_sorted(
      [&](const Location& loc, const Element& e) { snap.positions.emplace(e, loc); });
  return snap;
}

std::vector<Element> initial_false_positives(const Filter& filter,
                                             const std::vector<Element>& support) {
  std::vector<Element> out;
  for (const Element& q : support)
    if (!filter.contains(q) && filter.query(q)) out.push_back(q);
  return out;
}

int64_t compute_potential(const PotentialState& state, const Filter& filter) {
  if (filter.size() != state.baseline.size())
    throw consistency_error("potential: element set differs from the baseline");
  const FilterParams& p = filter.params();
  int64_t phi = 0;
  for (const Element& q : state.initial_fps) {
    for (uint32_t t = 0; t < p.k; ++t) {
      const uint32_t bin = filter.family().location(t, q);
      for (uint32_t s = 0; s < p.b; ++s) {
        const Location loc{t, bin, s};
        const Slot& slot = filter.tables().at(loc);
        if (!slot.occupied) continue;
        if (slot.fingerprint != filter.expected_fingerprint(q, loc, slot)) continue;
        const Element& x = filter.dict().peek_at(loc);
        if (state.baseline.at(x).table == loc.table) ++phi;
      }
    }
  }
  return phi;
}

bool check_suffix_property(const PathRecord& path, const ConfigSnapshot& baseline) {
  if (path.looped)
    throw contract_error("suffix property applies to non-looping paths only");
  bool diverged = false;
  for (const Move& m : path.moves) {
    const bool differs = m.from.table != baseline.at(m.element).table;
    if (diverged && !differs) return false;
    if (differs) diverged = true;
  }
  return true;
}

bool check_suffix_property(const PathRecord& path, const ConfigSnapshot& baseline,
                           const ConfigSnapshot& pre_fix) {
  for (const Move& m : path.moves) (void)pre_fix.at(m.element);
  return check_suffix_property(path, baseline);
}

LoopStats loop_rate(const std::vector<PathRecord>& records) {
  LoopStats st;
  st.paths = records.size();
  for (const PathRecord& r : records)
    if (r.looped) ++st.looped;
  st.rate = st.paths == 0 ? 0.0
                          : static_cast<double>(st.looped) / static_cast<double>(st.paths);
  return st;
}

void Instrumentation::arm(const std::vector<Element>& support) {
  state_.baseline = snapshot_config(*filter_, "C0");
  state_.support = support;
  state_.initial_fps = initial_false_positives(*filter_, support);
  baseline_clone_ = *filter_;
  records_.clear();
  run_log_.clear();
  query_index_ = 0;
  armed_ = true;
  filter_->set_fix_observer(this);
}

void Instrumentation::detach() {
  if (armed_ && filter_) filter_->set_fix_observer(nullptr);
  armed_ = false;
}

void Instrumentation::begin_query(const Element&) {
  ++query_index_;
  moves_this_query_ = 0;
  looped_this_query_ = false;
}

void Instrumentation::finish_query(bool was_fp) {
  if (!log_rows_) return;
  RunLogRow row;
  row.query_index = query_index_;
  row.was_fp = was_fp;
  row.path_len = moves_this_query_;
  row.looped = looped_this_query_;
  row.phi = log_phi_ ? potential() : 0;
  run_log_.push_back(row);
}

void Instrumentation::enable_run_log(bool with_potential) {
  log_rows_ = true;
  log_phi_ = with_potential;
}

void Instrumentation::on_fix_execution(const FixExecution& exec) {
  PathRecord rec;
  rec.query_index = query_index_;
  rec.config_label = "C_{i-1}";
  rec.moves = exec.moves;
  rec.looped = exec.looped;
  rec.rebuilt = exec.rebuilt;
  moves_this_query_ += exec.moves.size();
  looped_this_query_ = looped_this_query_ || exec.looped;
  records_.push_back(std::move(rec));
}

std::vector<PathRecord> Instrumentation::replay_on_baseline(const Element& q) const {
  if (!baseline_clone_) throw contract_error("replay requires an armed baseline");
  Filter clone = *baseline_clone_;

  struct Collector final : FixObserver {
    std::vector<PathRecord> recs;
    void on_fix_execution(const FixExecution& exec) override {
      PathRecord rec;
      rec.query_index = 0;
      rec.config_label = "C0";
      rec.moves = exec.moves;
      rec.looped = exec.looped;
      rec.rebuilt = exec.rebuilt;
      recs.push_back(std::move(rec));
    }
  } collector;

  clone.set_fix_observer(&collector);
  if (clone.query(q) && !clone.contains(q)) clone.fix(q);
  return std::move(collector.recs);
}

void Instrumentation::export_run_log_csv(std::ostream& out) const {
  out << "query_index,was_fp,path_len,looped,phi\n";
  for (const RunLogRow& r : run_log_) {
    out << r.query_index << ',' << (r.was_fp ? 1 : 0) << ',' << r.path_len << ','
        << (r.looped ? 1 : 0) << ',' << r.phi << '\n';
  }
}

}  // namespace acf

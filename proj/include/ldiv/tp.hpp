//
// Copyright 2026 The ldiv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Three-phase tuple minimization.
//
// The QI-groups of a table are shrunk by moving tuples into a residue set R
// until every group and R are l-eligible:
//
//   phase one    strips each group down to its largest l-eligible core;
//                optimal if R is already eligible afterwards.
//   phase two    grows R without raising its pillar height, feeding it the
//                least frequent alive SA value (additive error <= l - 1).
//   phase three  rounds of greedy set cover over the pillars of R followed
//                by re-killing the groups that came back alive
//                (l-approximation overall).
//
// Ties are broken by smallest SA id, then smallest group index.

#ifndef LDIV_TP_HPP_
#define LDIV_TP_HPP_

#include <algorithm>
#include <array>
#include <iterator>
#include <optional>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldiv/count_buckets.hpp"
#include "ldiv/error.hpp"
#include "ldiv/model.hpp"

namespace ldiversity {

struct RunReport {
  int terminal_phase = 1;
  bool optimal = false;  // terminated in phase one
  std::int64_t residue_size = 0;
  std::int64_t residue_height = 0;
  std::array<std::int64_t, 3> removed_per_phase{};
  std::size_t rounds = 0;

  // Instrumentation.
  std::int64_t height_after_phase_one = 0;
  std::int64_t height_after_phase_two = 0;
  std::size_t pillars_after_phase_two = 0;
  std::vector<std::int64_t> round_height_increase;
  std::vector<std::size_t> round_cover_size;
  std::size_t moves = 0;
};

// Groups, residue and their inverted arrays for one run.
class PartitionState {
 public:
  PartitionState(const GroupedTable& grouped, int l) : l_(l) {
    CheckL();
    std::size_t n = 0;
    SaValue max_value = 0;
    for (const auto& g : grouped.groups) {
      n += g.rows.size();
      if (!g.histogram.counts().empty()) {
        max_value = std::max(max_value, g.histogram.counts().rbegin()->first);
      }
    }
    Init(max_value, n);
    for (const auto& g : grouped.groups) AddGroup(g);
  }

  // Builds a state from bare histograms; row ids are synthesized in order
  // (groups first, then the initial residue).
  static PartitionState FromHistograms(std::span<const SaHistogram> groups,
                                       const SaHistogram& residue, int l) {
    GroupedTable grouped;
    RowId next = 0;
    std::vector<SaValue> sa_of_row;
    for (const auto& h : groups) {
      QiGroup g;
      g.histogram = h;
      for (const auto& [v, c] : h.counts()) {
        for (std::int64_t k = 0; k < c; ++k) {
          g.rows.push_back(next++);
          sa_of_row.push_back(v);
        }
      }
      grouped.groups.push_back(std::move(g));
    }
    for (const auto& [v, c] : residue.counts()) {
      sa_of_row.insert(sa_of_row.end(), static_cast<std::size_t>(c), v);
    }
    PartitionState state(grouped, sa_of_row, l, residue.total());
    for (const auto& [v, c] : residue.counts()) {
      state.EnsureValue(v);
      for (std::int64_t k = 0; k < c; ++k) {
        state.residue_.increment(static_cast<std::size_t>(v));
        state.residue_rows_.push_back(next++);
      }
    }
    return state;
  }

  // Same as the GroupedTable constructor but with SA values supplied per
  // row id, which lets rows inside a group keep their identities.
  PartitionState(const GroupedTable& grouped, std::span<const SaValue> sa_of_row,
                 int l, std::int64_t extra_residue = 0)
      : l_(l) {
    CheckL();
    std::size_t n = static_cast<std::size_t>(extra_residue);
    SaValue max_value = 0;
    for (const auto& g : grouped.groups) n += g.rows.size();
    for (SaValue v : sa_of_row) max_value = std::max(max_value, v);
    Init(max_value, n);
    for (const auto& g : grouped.groups) AddGroup(g, sa_of_row);
  }

  int l() const { return l_; }
  std::size_t group_count() const { return groups_.size(); }

  std::int64_t group_size(std::size_t i) const { return groups_[i].buckets.total(); }
  std::int64_t group_height(std::size_t i) const {
    return groups_[i].buckets.height();
  }
  std::int64_t group_count_of(std::size_t i, SaValue v) const {
    const auto local = Find(i, v);
    return local ? groups_[i].buckets.count(*local) : 0;
  }
  SaHistogram group_histogram(std::size_t i) const {
    SaHistogram h;
    const Group& g = groups_[i];
    for (std::size_t k = 0; k < g.values.size(); ++k) {
      h.add(g.values[k], g.buckets.count(k));
    }
    return h;
  }
  std::vector<RowId> group_rows(std::size_t i) const {
    std::vector<RowId> out;
    for (const auto& set : groups_[i].rows) out.insert(out.end(), set.begin(), set.end());
    std::sort(out.begin(), out.end());
    return out;
  }
  // Pillars of group i, ascending.
  std::vector<SaValue> group_pillars(std::size_t i) const {
    std::vector<SaValue> out;
    const Group& g = groups_[i];
    for (std::size_t k : g.buckets.pillars()) out.push_back(g.values[k]);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::int64_t residue_size() const { return residue_.total(); }
  std::int64_t residue_height() const { return residue_.height(); }
  std::int64_t residue_count(SaValue v) const {
    return static_cast<std::size_t>(v) < residue_.keys()
               ? residue_.count(static_cast<std::size_t>(v))
               : 0;
  }
  SaHistogram residue_histogram() const {
    SaHistogram h;
    for (std::size_t v = 1; v < residue_.keys(); ++v) {
      h.add(static_cast<SaValue>(v), residue_.count(v));
    }
    return h;
  }
  std::vector<SaValue> residue_pillars() const {
    std::vector<SaValue> out;
    for (std::size_t v : residue_.pillars()) out.push_back(static_cast<SaValue>(v));
    std::sort(out.begin(), out.end());
    return out;
  }
  bool is_residue_pillar(SaValue v) const {
    return static_cast<std::size_t>(v) < residue_.keys() &&
           residue_.is_pillar(static_cast<std::size_t>(v));
  }
  // |R| >= l * h(R).
  bool residue_eligible() const {
    return residue_.total() >= static_cast<std::int64_t>(l_) * residue_.height();
  }
  const std::vector<RowId>& residue_rows() const { return residue_rows_; }

  bool is_eligible(std::size_t i) const {
    return group_size(i) >= static_cast<std::int64_t>(l_) * group_height(i);
  }
  bool is_thin(std::size_t i) const {
    return group_size(i) == static_cast<std::int64_t>(l_) * group_height(i);
  }
  bool is_fat(std::size_t i) const {
    return group_size(i) >= static_cast<std::int64_t>(l_) * group_height(i) + 1;
  }
  bool is_conflicting(std::size_t i) const {
    const Group& g = groups_[i];
    for (std::size_t k : g.buckets.pillars()) {
      if (is_residue_pillar(g.values[k])) return true;
    }
    return false;
  }
  // An empty group has nothing left to give and counts as dead.
  bool is_alive(std::size_t i) const {
    if (group_size(i) == 0) return false;
    return !is_thin(i) || !is_conflicting(i);
  }

  std::size_t moves() const { return moves_; }

  // Moves one tuple with SA value v from group i into the residue.
  void move_tuple(std::size_t i, SaValue v) {
    if (i >= groups_.size()) {
      throw InvalidArgument("group index " + std::to_string(i) + " out of range");
    }
    const auto local = Find(i, v);
    Group& g = groups_[i];
    if (!local || g.buckets.count(*local) == 0) {
      throw InvalidArgument("group " + std::to_string(i) +
                            " holds no tuple with SA value " + std::to_string(v));
    }
    g.buckets.decrement(*local);
    auto& rows = g.rows[*local];
    residue_rows_.push_back(rows.back());
    rows.pop_back();
    residue_.increment(static_cast<std::size_t>(v));
    ++moves_;
  }

  // Removes one tuple from every pillar of group i (pillars snapshotted
  // first, ascending).
  void strip_pillars(std::size_t i) {
    for (SaValue v : group_pillars(i)) move_tuple(i, v);
  }

  // Local SA values of group i that are still present, ascending.
  std::vector<SaValue> group_values(std::size_t i) const {
    std::vector<SaValue> out;
    const Group& g = groups_[i];
    for (std::size_t k = 0; k < g.values.size(); ++k) {
      if (g.buckets.count(k) > 0) out.push_back(g.values[k]);
    }
    return out;
  }

  std::size_t max_value() const { return residue_.keys() - 1; }

 private:
  struct Group {
    std::vector<SaValue> values;           // ascending, distinct
    std::vector<std::vector<RowId>> rows;  // SA set per local key
    CountBuckets buckets;
  };

  void CheckL() const {
    if (l_ < 1) throw InvalidArgument("l must be at least 1");
  }

  void Init(SaValue max_value, std::size_t n) {
    residue_ = CountBuckets(static_cast<std::size_t>(max_value) + 1, n);
  }

  void EnsureValue(SaValue v) {
    if (v < 1) throw InvalidArgument("SA values are 1-based");
    if (static_cast<std::size_t>(v) >= residue_.keys()) {
      throw InvalidArgument("residue SA value " + std::to_string(v) +
                            " not present in any group");
    }
  }

  std::optional<std::size_t> Find(std::size_t i, SaValue v) const {
    const auto& vals = groups_[i].values;
    auto it = std::lower_bound(vals.begin(), vals.end(), v);
    if (it == vals.end() || *it != v) return std::nullopt;
    return static_cast<std::size_t>(it - vals.begin());
  }

  void AddGroup(const QiGroup& qg, std::span<const SaValue> sa_of_row = {}) {
    Group g;
    for (const auto& [v, c] : qg.histogram.counts()) g.values.push_back(v);
    g.rows.resize(g.values.size());
    g.buckets = CountBuckets(g.values.size(), static_cast<std::size_t>(qg.rows.size()));
    if (!sa_of_row.empty()) {
      for (RowId r : qg.rows) {
        const auto it = std::lower_bound(g.values.begin(), g.values.end(), sa_of_row[r]);
        if (it == g.values.end() || *it != sa_of_row[r]) {
          throw InvalidArgument("group rows disagree with its histogram");
        }
        g.rows[static_cast<std::size_t>(it - g.values.begin())].push_back(r);
      }
    } else {
      // Without per-row SA values, assign row ids to SA sets in histogram
      // order.
      std::size_t next = 0;
      for (std::size_t k = 0; k < g.values.size(); ++k) {
        for (std::int64_t c = 0; c < qg.histogram.count(g.values[k]); ++c) {
          g.rows[k].push_back(qg.rows.at(next++));
        }
      }
    }
    for (std::size_t k = 0; k < g.values.size(); ++k) {
      if (static_cast<std::int64_t>(g.rows[k].size()) != qg.histogram.count(g.values[k])) {
        throw InvalidArgument("group rows disagree with its histogram");
      }
      for (std::size_t c = 0; c < g.rows[k].size(); ++c) g.buckets.increment(k);
    }
    groups_.push_back(std::move(g));
  }

  int l_;
  std::vector<Group> groups_;
  CountBuckets residue_;
  std::vector<RowId> residue_rows_;
  std::size_t moves_ = 0;
};

// Phase one: strip every group down to l-eligibility by repeatedly removing
// one tuple from each of its pillars. Returns true when R ends l-eligible,
// in which case the solution is optimal.
inline bool phase_one(PartitionState& state) {
  SaHistogram global = state.residue_histogram();
  for (std::size_t i = 0; i < state.group_count(); ++i) {
    global += state.group_histogram(i);
  }
  if (!is_l_eligible(global, state.l())) {
    throw Ineligible("input is not " + std::to_string(state.l()) +
                     "-eligible; SA value " + std::to_string(pillars(global).front()) +
                     " occurs " + std::to_string(global.height()) + " times in " +
                     std::to_string(global.total()) + " tuples");
  }
  for (std::size_t i = 0; i < state.group_count(); ++i) {
    while (!state.is_eligible(i)) state.strip_pillars(i);
  }
  return state.residue_eligible();
}

// Phase two: while some group is alive, pick the alive SA value v with the
// least h(R, v) and take it from the first alive group holding it (a thin
// group gives one tuple from each of its pillars instead). Returns true as
// soon as R is l-eligible, false when every group is dead.
inline bool phase_two(PartitionState& state) {
  if (state.residue_eligible()) return true;
  const std::size_t keys = state.max_value() + 1;

  // Per SA value: the groups holding it, ascending, consumed from the head
  // as they die or run out of that value.
  std::vector<std::vector<std::size_t>> holders(keys);
  std::vector<std::size_t> head(keys, 0);
  for (std::size_t i = 0; i < state.group_count(); ++i) {
    for (SaValue v : state.group_values(i)) holders[v].push_back(i);
  }

  // Candidate list ordered by (h(R, v), v).
  std::set<std::pair<std::int64_t, SaValue>> candidates;
  std::vector<bool> listed(keys, false);
  for (std::size_t v = 1; v < keys; ++v) {
    if (!holders[v].empty()) {
      candidates.emplace(state.residue_count(static_cast<SaValue>(v)),
                         static_cast<SaValue>(v));
      listed[v] = true;
    }
  }

  auto move = [&](std::size_t i, SaValue v) {
    const std::int64_t before = state.residue_count(v);
    state.move_tuple(i, v);
    if (listed[v]) {
      candidates.erase({before, v});
      candidates.emplace(before + 1, v);
    }
  };

  while (!state.residue_eligible()) {
    std::size_t group = 0;
    SaValue value = 0;
    while (!candidates.empty()) {
      const auto [count, v] = *candidates.begin();
      auto& list = holders[v];
      std::size_t& h = head[v];
      while (h < list.size() &&
             (!state.is_alive(list[h]) || state.group_count_of(list[h], v) == 0)) {
        ++h;
      }
      if (h == list.size()) {
        candidates.erase(candidates.begin());
        listed[v] = false;
        continue;
      }
      group = list[h];
      value = v;
      break;
    }
    if (candidates.empty()) return false;

    if (state.is_fat(group)) {
      move(group, value);
    } else {
      for (SaValue p : state.group_pillars(group)) move(group, p);
    }
  }
  return true;
}

namespace internal {

// Greedy set cover over the pillars P of R: repeatedly pick the group whose
// conflicting pillars leave the fewest of P uncovered, then keep only those.
inline std::vector<std::size_t> SelectCoverGroups(const PartitionState& state) {
  std::vector<SaValue> remaining = state.residue_pillars();
  std::vector<std::size_t> picked;
  std::vector<bool> used(state.group_count(), false);
  while (!remaining.empty()) {
    std::size_t best = state.group_count();
    std::vector<SaValue> best_left;
    for (std::size_t i = 0; i < state.group_count(); ++i) {
      if (used[i] || state.group_size(i) == 0) continue;
      std::vector<SaValue> left;
      const auto gp = state.group_pillars(i);
      std::set_intersection(remaining.begin(), remaining.end(), gp.begin(),
                            gp.end(), std::back_inserter(left));
      if (best == state.group_count() || left.size() < best_left.size()) {
        best = i;
        best_left = std::move(left);
        if (best_left.empty()) break;
      }
    }
    if (best == state.group_count() || best_left.size() == remaining.size()) {
      throw InvariantViolation(
          "greedy cover cannot shrink the residue pillar set (" +
          std::to_string(remaining.size()) + " pillars left)");
    }
    used[best] = true;
    picked.push_back(best);
    remaining = std::move(best_left);
  }
  return picked;
}

}  // namespace internal

// Phase three: rounds of (1) greedy cover over the pillars of R, stripping a
// tuple from every pillar of each chosen group, and (2) re-killing every
// group that is alive again. Runs until R is l-eligible. Returns the number
// of rounds; per-round pillar growth is appended to report if given.
inline std::size_t phase_three(PartitionState& state, RunReport* report = nullptr) {
  std::size_t rounds = 0;
  std::size_t cap = static_cast<std::size_t>(state.residue_size());
  for (std::size_t i = 0; i < state.group_count(); ++i) {
    cap += static_cast<std::size_t>(state.group_size(i));
  }

  while (!state.residue_eligible()) {
    if (++rounds > cap) {
      throw InvariantViolation("phase three exceeded " + std::to_string(cap) +
                               " rounds");
    }
    const std::int64_t before = state.residue_height();
    const auto cover = internal::SelectCoverGroups(state);
    if (report != nullptr) report->round_cover_size.push_back(cover.size());

    bool done = false;
    for (std::size_t i : cover) {
      state.strip_pillars(i);
      if (state.residue_eligible()) {
        done = true;
        break;
      }
    }
    for (std::size_t i = 0; !done && i < state.group_count(); ++i) {
      while (!done && state.is_alive(i)) {
        if (state.is_fat(i)) {
          SaValue pick = 0;
          for (SaValue v : state.group_values(i)) {
            if (!state.is_residue_pillar(v)) {
              pick = v;
              break;
            }
          }
          if (pick == 0) {
            throw InvariantViolation("fat group " + std::to_string(i) +
                                     " holds only pillars of R");
          }
          state.move_tuple(i, pick);
        } else {
          state.strip_pillars(i);
        }
        done = state.residue_eligible();
      }
    }
    if (report != nullptr) {
      report->round_height_increase.push_back(state.residue_height() - before);
    }
  }
  return rounds;
}

// Runs the phases in order on a prepared state.
inline RunReport solve(PartitionState& state) {
  RunReport report;
  const std::int64_t start = state.residue_size();
  std::int64_t mark = start;
  auto record = [&](int phase) {
    report.removed_per_phase[phase - 1] = state.residue_size() - mark;
    mark = state.residue_size();
  };

  bool done = phase_one(state);
  record(1);
  report.height_after_phase_one = state.residue_height();
  report.terminal_phase = 1;
  if (!done) {
    done = phase_two(state);
    record(2);
    report.terminal_phase = 2;
    report.height_after_phase_two = state.residue_height();
    report.pillars_after_phase_two = state.residue_pillars().size();
    if (!done) {
      report.rounds = phase_three(state, &report);
      record(3);
      report.terminal_phase = 3;
    }
  } else {
    report.height_after_phase_two = report.height_after_phase_one;
  }
  report.optimal = report.terminal_phase == 1;
  report.residue_size = state.residue_size();
  report.residue_height = state.residue_height();
  report.moves = state.moves();
  if (!state.residue_eligible()) {
    throw InvariantViolation("residue not l-eligible at termination");
  }
  return report;
}

struct TpResult {
  GroupedTable groups;          // QI-groups after removals (possibly empty)
  std::vector<RowId> residue;   // suppressed rows, ascending
  RunReport report;
};

// Full three-phase run over a table.
inline TpResult run_tp(const MicrodataTable& table, int l) {
  if (l < 2) throw InvalidArgument("l must be at least 2, got " + std::to_string(l));
  RequireEligible(table, l);
  GroupedTable grouped = group_by_qi(table);
  PartitionState state(grouped, table.sa_column(), l);
  TpResult out;
  out.report = solve(state);
  for (std::size_t i = 0; i < grouped.groups.size(); ++i) {
    grouped.groups[i].histogram = state.group_histogram(i);
    grouped.groups[i].rows = state.group_rows(i);
  }
  out.groups = std::move(grouped);
  out.residue = state.residue_rows();
  std::sort(out.residue.begin(), out.residue.end());
  return out;
}

}  // namespace ldiversity

#endif  // LDIV_TP_HPP_

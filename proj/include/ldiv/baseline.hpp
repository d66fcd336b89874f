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

// Heuristic baseline: order rows along a Hilbert curve over the QI grid and
// cut the sequence into l-eligible runs. Also the TP+ hybrid, which applies
// that baseline to the residue left by the three-phase algorithm.

#ifndef LDIV_BASELINE_HPP_
#define LDIV_BASELINE_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <tuple>
#include <vector>

#include "ldiv/error.hpp"
#include "ldiv/hilbert.hpp"
#include "ldiv/metrics.hpp"
#include "ldiv/model.hpp"
#include "ldiv/tp.hpp"

namespace ldiversity {

// Maps each row to its Hilbert position, using domain order as the
// coordinate of a categorical value.
class CurveEmbedding {
 public:
  explicit CurveEmbedding(const Schema& schema) {
    std::size_t extent = 1;
    for (const auto& a : schema.qi()) extent = std::max(extent, a.domain_size());
    bits_ = HilbertOrder(extent);
  }

  unsigned order() const { return bits_; }

  std::vector<std::uint64_t> key(const MicrodataTable& table, RowId r) const {
    const auto q = table.qi(r);
    std::vector<std::uint32_t> coords(q.begin(), q.end());
    return HilbertKey(coords, bits_);
  }

 private:
  unsigned bits_ = 1;
};

// Partitions `rows` (which must be l-eligible together) into l-eligible
// groups along the curve. A trailing run that never becomes eligible is
// merged backwards into earlier groups until the merged block is.
inline Partition hilbert_partition(const MicrodataTable& table,
                                   std::span<const RowId> rows, int l) {
  CheckDiversity(l);
  SaHistogram all;
  for (RowId r : rows) all.add(table.sa(r));
  if (!is_l_eligible(all, l)) {
    throw Ineligible("rows handed to the Hilbert baseline are not " +
                     std::to_string(l) + "-eligible");
  }
  const CurveEmbedding curve(table.schema());
  std::vector<std::tuple<std::vector<std::uint64_t>, SaValue, RowId>> order;
  order.reserve(rows.size());
  for (RowId r : rows) order.emplace_back(curve.key(table, r), table.sa(r), r);
  std::sort(order.begin(), order.end());

  Partition out;
  std::vector<SaHistogram> hists;
  std::vector<RowId> current;
  SaHistogram current_hist;
  for (const auto& [key, sa, r] : order) {
    current.push_back(r);
    current_hist.add(sa);
    if (is_l_eligible(current_hist, l)) {
      out.groups.push_back(std::move(current));
      hists.push_back(current_hist);
      current.clear();
      current_hist = SaHistogram();
    }
  }
  while (!current.empty()) {
    if (out.groups.empty()) {
      throw InvariantViolation("Hilbert tail repair ran out of groups");
    }
    auto& last = out.groups.back();
    current.insert(current.begin(), last.begin(), last.end());
    current_hist += hists.back();
    out.groups.pop_back();
    hists.pop_back();
    if (is_l_eligible(current_hist, l)) {
      out.groups.push_back(std::move(current));
      hists.push_back(current_hist);
      current.clear();
    }
  }
  return out;
}

inline Partition hilbert_partition(const MicrodataTable& table, int l) {
  std::vector<RowId> rows(table.size());
  std::iota(rows.begin(), rows.end(), RowId{0});
  return hilbert_partition(table, rows, l);
}

struct TpPlusResult {
  TpResult tp;
  Partition partition;
  SuppressedTable published;
};

// Three-phase run, then the residue is split further along the curve.
inline TpPlusResult tp_plus(const MicrodataTable& table, int l) {
  TpPlusResult out;
  out.tp = run_tp(table, l);
  for (const auto& g : out.tp.groups.groups) {
    if (!g.rows.empty()) out.partition.groups.push_back(g.rows);
  }
  if (!out.tp.residue.empty()) {
    Partition refined = hilbert_partition(table, out.tp.residue, l);
    for (auto& g : refined.groups) out.partition.groups.push_back(std::move(g));
  }
  out.published = materialize(table, out.partition);
  return out;
}

}  // namespace ldiversity

#endif  // LDIV_BASELINE_HPP_

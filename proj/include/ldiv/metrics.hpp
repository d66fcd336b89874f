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

// Suppression-based generalization and information-loss measures.

#ifndef LDIV_METRICS_HPP_
#define LDIV_METRICS_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ldiv/error.hpp"
#include "ldiv/model.hpp"
#include "ldiv/tp.hpp"

namespace ldiversity {

// A set of disjoint row groups that together cover a table.
struct Partition {
  std::vector<std::vector<RowId>> groups;
};

// Retained TP groups (nonempty) followed by the residue as one group.
inline Partition ToPartition(const TpResult& result) {
  Partition p;
  for (const auto& g : result.groups.groups) {
    if (!g.rows.empty()) p.groups.push_back(g.rows);
  }
  if (!result.residue.empty()) p.groups.push_back(result.residue);
  return p;
}

inline bool IsLDiverse(const MicrodataTable& table, const Partition& p, int l) {
  for (const auto& g : p.groups) {
    SaHistogram h;
    for (RowId r : g) h.add(table.sa(r));
    if (!is_l_eligible(h, l)) return false;
  }
  return true;
}

inline constexpr std::int64_t kStar = -1;

// A table published by suppression: a QI cell keeps its
// value when the whole group agrees on it and becomes a star otherwise.
class SuppressedTable {
 public:
  SuppressedTable() = default;
  SuppressedTable(Schema schema, std::vector<std::int64_t> cells,
                  std::vector<SaValue> sa, std::vector<std::size_t> group_of_row)
      : schema_(std::move(schema)),
        cells_(std::move(cells)),
        sa_(std::move(sa)),
        group_(std::move(group_of_row)) {}

  const Schema& schema() const { return schema_; }
  std::size_t size() const { return sa_.size(); }
  std::size_t d() const { return schema_.d(); }
  bool is_star(RowId r, std::size_t a) const { return cells_[r * d() + a] == kStar; }
  // Domain index of a kept cell; kStar for a suppressed cell.
  std::int64_t cell(RowId r, std::size_t a) const { return cells_[r * d() + a]; }
  SaValue sa(RowId r) const { return sa_[r]; }
  std::size_t group(RowId r) const { return group_[r]; }

 private:
  Schema schema_;
  std::vector<std::int64_t> cells_;
  std::vector<SaValue> sa_;
  std::vector<std::size_t> group_;
};

inline SuppressedTable materialize(const MicrodataTable& table, const Partition& p) {
  const std::size_t n = table.size();
  const std::size_t d = table.d();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> group_of(n, kUnset);
  for (std::size_t g = 0; g < p.groups.size(); ++g) {
    for (RowId r : p.groups[g]) {
      if (r >= n) throw InvalidArgument("partition names row " + std::to_string(r) +
                                        " beyond the table");
      if (group_of[r] != kUnset) {
        throw InvalidArgument("row " + std::to_string(r) + " appears in groups " +
                              std::to_string(group_of[r]) + " and " + std::to_string(g));
      }
      group_of[r] = g;
    }
  }
  for (RowId r = 0; r < n; ++r) {
    if (group_of[r] == kUnset) {
      throw InvalidArgument("row " + std::to_string(r) + " is not covered by the partition");
    }
  }
  std::vector<std::int64_t> cells(n * d);
  std::vector<SaValue> sa(n);
  for (const auto& group : p.groups) {
    if (group.empty()) continue;
    for (std::size_t a = 0; a < d; ++a) {
      const ValueId first = table.qi(group.front(), a);
      bool same = true;
      for (RowId r : group) same = same && table.qi(r, a) == first;
      for (RowId r : group) cells[r * d + a] = same ? static_cast<std::int64_t>(first) : kStar;
    }
  }
  for (RowId r = 0; r < n; ++r) sa[r] = table.sa(r);
  return SuppressedTable(table.schema(), std::move(cells), std::move(sa), std::move(group_of));
}

inline std::int64_t count_stars(const SuppressedTable& st) {
  std::int64_t stars = 0;
  for (RowId r = 0; r < st.size(); ++r) {
    for (std::size_t a = 0; a < st.d(); ++a) stars += st.is_star(r, a) ? 1 : 0;
  }
  return stars;
}

// Rows carrying at least one star.
inline std::int64_t count_suppressed(const SuppressedTable& st) {
  std::int64_t rows = 0;
  for (RowId r = 0; r < st.size(); ++r) {
    for (std::size_t a = 0; a < st.d(); ++a) {
      if (st.is_star(r, a)) {
        ++rows;
        break;
      }
    }
  }
  return rows;
}

namespace internal {

class KahanSum {
 public:
  void add(double x) {
    const double y = x - c_;
    const double t = sum_ + y;
    c_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

}  // namespace internal

// KL(f, f*) over the (d + 1)-dimensional point space, where f is the
// empirical distribution of the original rows and f* spreads each published
// row uniformly over the domain of every starred attribute. Only points with
// f(p) > 0 contribute.
inline double kl_divergence(const MicrodataTable& table, const SuppressedTable& st) {
  const std::size_t n = table.size();
  const std::size_t d = table.d();
  if (st.size() != n || st.d() != d || st.schema().m() != table.schema().m()) {
    throw InvalidArgument("suppressed table does not match the original schema");
  }
  for (std::size_t a = 0; a < d; ++a) {
    if (st.schema().qi(a).domain_size() != table.schema().qi(a).domain_size()) {
      throw InvalidArgument("domain of '" + table.schema().qi(a).name() + "' differs");
    }
  }
  if (n == 0) return 0.0;

  // Published rows grouped by star mask; within a mask, the concrete cells
  // plus SA form a projection key carrying the summed weight of the rows.
  using Key = std::vector<ValueId>;
  struct MaskBucket {
    std::vector<bool> mask;
    double spread = 1.0;  // product of 1/|dom| over starred attributes
    std::unordered_map<Key, double, internal::KeyHash> weight;
  };
  std::vector<MaskBucket> buckets;
  std::unordered_map<std::vector<bool>, std::size_t> mask_index;
  for (RowId r = 0; r < n; ++r) {
    std::vector<bool> mask(d);
    Key key;
    for (std::size_t a = 0; a < d; ++a) {
      mask[a] = st.is_star(r, a);
      if (!mask[a]) key.push_back(static_cast<ValueId>(st.cell(r, a)));
    }
    key.push_back(static_cast<ValueId>(st.sa(r)));
    auto [it, inserted] = mask_index.try_emplace(mask, buckets.size());
    if (inserted) {
      MaskBucket b;
      b.mask = mask;
      for (std::size_t a = 0; a < d; ++a) {
        if (mask[a]) b.spread /= static_cast<double>(table.schema().qi(a).domain_size());
      }
      buckets.push_back(std::move(b));
    }
    buckets[it->second].weight[key] += 1.0;
  }

  std::unordered_map<Key, std::int64_t, internal::KeyHash> points;
  for (RowId r = 0; r < n; ++r) {
    auto q = table.qi(r);
    Key p(q.begin(), q.end());
    p.push_back(static_cast<ValueId>(table.sa(r)));
    ++points[p];
  }

  internal::KahanSum kl;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (const auto& [p, count] : points) {
    double covered = 0.0;
    for (const auto& b : buckets) {
      Key proj;
      for (std::size_t a = 0; a < d; ++a) {
        if (!b.mask[a]) proj.push_back(p[a]);
      }
      proj.push_back(p[d]);
      auto it = b.weight.find(proj);
      if (it != b.weight.end()) covered += it->second * b.spread;
    }
    const double f = static_cast<double>(count) * inv_n;
    const double f_star = covered * inv_n;
    if (f_star <= 0.0) {
      throw InvariantViolation("published table assigns zero mass to an observed point");
    }
    kl.add(f * std::log(f / f_star));
  }
  return kl.value() < 0.0 ? 0.0 : kl.value();
}

}  // namespace ldiversity

#endif  // LDIV_METRICS_HPP_

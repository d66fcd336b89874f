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

// Hard instances for star minimization built from 3-dimensional matching.
//
// Each of the 3n coordinate values becomes a row and each point p_i a QI
// attribute A_i: a row holds 0 on A_i when its value is a coordinate of p_i
// and its own SA value otherwise. A perfect matching of n points then
// yields a 3-diverse generalization with exactly 3n(d - 1) stars, and no
// 3-diverse generalization can do better.

#ifndef LDIV_GADGET_HPP_
#define LDIV_GADGET_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ldiv/error.hpp"
#include "ldiv/metrics.hpp"
#include "ldiv/model.hpp"

namespace ldiversity {

struct ReductionInstance {
  std::size_t n = 0;  // values per dimension
  // Coordinates are 0-based indices into each dimension's n values.
  std::vector<std::array<std::size_t, 3>> points;
  std::size_t m = 3;  // distinct SA values in the built table

  std::size_t d() const { return points.size(); }

  void Validate() const {
    if (n == 0) throw InvalidArgument("3DM instance needs n >= 1");
    if (points.size() < n) {
      throw InvalidArgument("3DM instance needs at least n = " + std::to_string(n) +
                            " points, got " + std::to_string(points.size()));
    }
    std::set<std::array<std::size_t, 3>> seen;
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (std::size_t k = 0; k < 3; ++k) {
        if (points[i][k] >= n) {
          throw InvalidArgument("point p" + std::to_string(i + 1) +
                                " has a coordinate outside its dimension");
        }
      }
      if (!seen.insert(points[i]).second) {
        throw InvalidArgument("point p" + std::to_string(i + 1) + " is a duplicate");
      }
    }
    if (m < 3 || m > 3 * n) {
      throw InvalidArgument("m must lie in [3, 3n] = [3, " + std::to_string(3 * n) +
                            "], got " + std::to_string(m));
    }
  }
};

// SA value of the j-th row (1-based), chosen so that the table holds exactly
// m distinct values and rows of different dimensions never share one.
inline std::size_t ReductionSaValue(std::size_t j, std::size_t n, std::size_t m) {
  if (j <= m - 2) return j;
  if (m - 1 > 2 * n) return j <= 3 * n - 1 ? m - 1 : m;
  if (m - 1 > n) return j <= 2 * n ? m - 1 : m;
  if (j <= n) return m - 2;
  if (j <= 2 * n) return m - 1;
  return m;
}

// Row index (0-based) of coordinate value c in dimension k.
inline RowId ReductionRow(std::size_t n, std::size_t k, std::size_t c) { return k * n + c; }

inline MicrodataTable build_reduction(const ReductionInstance& inst) {
  inst.Validate();
  const std::size_t n = inst.n;
  const std::size_t d = inst.d();
  std::vector<std::string> alphabet;
  for (std::size_t v = 0; v <= inst.m; ++v) alphabet.push_back(std::to_string(v));
  std::vector<Attribute> qi;
  for (std::size_t i = 0; i < d; ++i) qi.emplace_back("A" + std::to_string(i + 1), alphabet);
  std::vector<std::string> sa_domain(alphabet.begin() + 1, alphabet.end());
  Schema schema(std::move(qi), Attribute("B", std::move(sa_domain)));

  std::vector<ValueId> cells(3 * n * d);
  std::vector<SaValue> sa(3 * n);
  for (std::size_t j = 1; j <= 3 * n; ++j) {
    const std::size_t u = ReductionSaValue(j, n, inst.m);
    const std::size_t k = (j - 1) / n;
    const std::size_t c = (j - 1) % n;
    sa[j - 1] = static_cast<SaValue>(u);
    for (std::size_t i = 0; i < d; ++i) {
      cells[(j - 1) * d + i] = inst.points[i][k] == c ? 0 : static_cast<ValueId>(u);
    }
  }
  return MicrodataTable(std::move(schema), std::move(cells), std::move(sa));
}

// The n useful QI-groups induced by a perfect matching (indices into
// inst.points): each group holds the three rows zeroed on that point's
// attribute.
inline Partition matching_to_partition(const ReductionInstance& inst,
                                       const std::vector<std::size_t>& matching,
                                       const MicrodataTable& table) {
  inst.Validate();
  if (table.size() != 3 * inst.n || table.d() != inst.d()) {
    throw InvalidArgument("table was not built from this instance");
  }
  if (matching.size() != inst.n) {
    throw InvalidArgument("a matching needs exactly n = " + std::to_string(inst.n) +
                          " points, got " + std::to_string(matching.size()));
  }
  std::array<std::vector<std::size_t>, 3> owner;
  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  for (auto& o : owner) o.assign(inst.n, kFree);
  Partition out;
  for (std::size_t idx : matching) {
    if (idx >= inst.points.size()) {
      throw InvalidArgument("matching names unknown point " + std::to_string(idx + 1));
    }
    std::vector<RowId> group;
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t c = inst.points[idx][k];
      if (owner[k][c] != kFree) {
        throw InvalidArgument("points p" + std::to_string(owner[k][c] + 1) + " and p" +
                              std::to_string(idx + 1) + " share coordinate " +
                              std::to_string(c) + " of dimension " + std::to_string(k + 1));
      }
      owner[k][c] = idx;
      group.push_back(ReductionRow(inst.n, k, c));
    }
    out.groups.push_back(std::move(group));
  }
  return out;
}

// Random l-diverse partition. Seeds blocks from rows sharing a value on a
// random attribute, then merges ineligible blocks into random partners
// until every block is eligible, then optionally merges a few more.
template <typename Rng>
Partition sample_diverse_partition(const MicrodataTable& table, int l, Rng& rng) {
  const std::size_t n = table.size();
  std::vector<std::vector<RowId>> blocks;
  std::vector<bool> used(n, false);
  std::uniform_int_distribution<std::size_t> pick_row(0, n == 0 ? 0 : n - 1);
  std::uniform_int_distribution<std::size_t> pick_attr(0, table.d() - 1);
  const std::size_t seeds = n == 0 ? 0 : std::uniform_int_distribution<std::size_t>(0, n)(rng);
  for (std::size_t s = 0; s < seeds; ++s) {
    const RowId r = pick_row(rng);
    const std::size_t a = pick_attr(rng);
    std::vector<RowId> block;
    for (RowId x = 0; x < n; ++x) {
      if (!used[x] && table.qi(x, a) == table.qi(r, a)) block.push_back(x);
    }
    for (RowId x : block) used[x] = true;
    if (!block.empty()) blocks.push_back(std::move(block));
  }
  for (RowId x = 0; x < n; ++x) {
    if (!used[x]) blocks.push_back({x});
  }
  auto eligible = [&](const std::vector<RowId>& b) {
    SaHistogram h;
    for (RowId r : b) h.add(table.sa(r));
    return is_l_eligible(h, l);
  };
  auto merge = [&](std::size_t a, std::size_t b) {
    blocks[a].insert(blocks[a].end(), blocks[b].begin(), blocks[b].end());
    blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(b));
  };
  for (;;) {
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (!eligible(blocks[i])) bad.push_back(i);
    }
    if (bad.empty()) break;
    if (blocks.size() == 1) throw Ineligible("table is not l-eligible");
    const std::size_t a = bad[std::uniform_int_distribution<std::size_t>(0, bad.size() - 1)(rng)];
    std::size_t b = std::uniform_int_distribution<std::size_t>(0, blocks.size() - 2)(rng);
    if (b >= a) ++b;
    merge(std::min(a, b), std::max(a, b));
  }
  const std::size_t extra = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
  for (std::size_t e = 0; e < extra && blocks.size() > 1; ++e) {
    const std::size_t a = std::uniform_int_distribution<std::size_t>(0, blocks.size() - 1)(rng);
    std::size_t b = std::uniform_int_distribution<std::size_t>(0, blocks.size() - 2)(rng);
    if (b >= a) ++b;
    merge(std::min(a, b), std::max(a, b));
  }
  Partition p;
  p.groups = std::move(blocks);
  return p;
}

// Samples random 3-diverse partitions of a reduction table and checks that
// none is published with fewer than 3n(d - 1) stars.
inline bool verify_lower_bound(const MicrodataTable& table, std::size_t samples,
                               std::uint64_t seed = 1, std::int64_t* min_stars = nullptr) {
  const auto n = static_cast<std::int64_t>(table.size() / 3);
  const auto d = static_cast<std::int64_t>(table.d());
  const std::int64_t bound = 3 * n * (d - 1);
  std::mt19937_64 rng(seed);
  bool holds = true;
  std::int64_t lowest = std::numeric_limits<std::int64_t>::max();
  for (std::size_t s = 0; s < samples; ++s) {
    const Partition p = sample_diverse_partition(table, 3, rng);
    const std::int64_t stars = count_stars(materialize(table, p));
    lowest = std::min(lowest, stars);
    if (stars < bound) holds = false;
  }
  if (min_stars != nullptr) *min_stars = lowest;
  return holds;
}

// The six-point example with n = 4 and m = 8. Dimension values are
// D1 = {1,2,3,4}, D2 = {a,b,c,d}, D3 = {alpha,beta,gamma,delta};
// {p1, p3, p5, p6} is a perfect matching.
inline ReductionInstance ExampleReductionInstance() {
  ReductionInstance inst;
  inst.n = 4;
  inst.m = 8;
  inst.points = {
      {0, 0, 0},  // p1 = (1, a, alpha)
      {0, 1, 1},  // p2 = (1, b, beta)
      {1, 2, 1},  // p3 = (2, c, beta)
      {1, 0, 2},  // p4 = (2, a, gamma)
      {2, 1, 3},  // p5 = (3, b, delta)
      {3, 3, 2},  // p6 = (4, d, gamma)
  };
  return inst;
}

}  // namespace ldiversity

#endif  // LDIV_GADGET_HPP_

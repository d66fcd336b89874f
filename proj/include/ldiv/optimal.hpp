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

// Exact solvers: the m = 2 case via minimum-weight perfect matching, and
// exhaustive oracles for tuple and star minimization on small inputs.

#ifndef LDIV_OPTIMAL_HPP_
#define LDIV_OPTIMAL_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "ldiv/error.hpp"
#include "ldiv/metrics.hpp"
#include "ldiv/model.hpp"

namespace ldiversity {

// Square matrix of nonnegative integer edge weights.
class CostMatrix {
 public:
  explicit CostMatrix(std::size_t n) : n_(n), w_(n * n, 0) {}
  std::size_t size() const { return n_; }
  std::int64_t& at(std::size_t i, std::size_t j) { return w_[i * n_ + j]; }
  std::int64_t at(std::size_t i, std::size_t j) const { return w_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<std::int64_t> w_;
};

struct Assignment {
  std::vector<std::size_t> column_of_row;
  std::int64_t cost = 0;
};

// Hungarian method with row/column potentials, O(n^3).
inline Assignment MinCostAssignment(const CostMatrix& cost) {
  const std::size_t n = cost.size();
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  // 1-based arrays; column 0 is the virtual start.
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost.at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Assignment out;
  out.column_of_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) {
    if (match[j] != 0) out.column_of_row[match[j] - 1] = j - 1;
  }
  for (std::size_t i = 0; i < n; ++i) out.cost += cost.at(i, out.column_of_row[i]);
  return out;
}

// Number of QI attributes on which two rows differ.
inline std::int64_t QiDistance(const MicrodataTable& table, RowId a, RowId b) {
  std::int64_t k = 0;
  for (std::size_t i = 0; i < table.d(); ++i) k += table.qi(a, i) != table.qi(b, i) ? 1 : 0;
  return k;
}

struct TwoDiverseSolution {
  Partition pairs;
  std::int64_t matching_weight = 0;  // sum of differing attributes over pairs
  std::int64_t stars = 0;            // stars after suppression; both rows of a pair
};

// Optimal 2-diverse generalization when the table has exactly two SA
// values: pair every row of one value with a row of the other through a
// minimum-weight perfect matching.
inline TwoDiverseSolution optimal_two_diverse(const MicrodataTable& table) {
  const SaHistogram hist = table.sa_histogram();
  if (hist.distinct() != 2) {
    throw InvalidArgument("the matching solver needs exactly 2 distinct SA values, got " +
                          std::to_string(hist.distinct()));
  }
  std::vector<RowId> first, second;
  const SaValue a = hist.counts().begin()->first;
  for (RowId r = 0; r < table.size(); ++r) (table.sa(r) == a ? first : second).push_back(r);
  if (first.size() != second.size()) {
    throw Ineligible("table is not 2-eligible: " + std::to_string(first.size()) + " vs " +
                     std::to_string(second.size()) + " rows per SA value");
  }
  CostMatrix cost(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    for (std::size_t j = 0; j < second.size(); ++j) {
      cost.at(i, j) = QiDistance(table, first[i], second[j]);
    }
  }
  const Assignment match = MinCostAssignment(cost);
  TwoDiverseSolution out;
  for (std::size_t i = 0; i < first.size(); ++i) {
    out.pairs.groups.push_back({first[i], second[match.column_of_row[i]]});
  }
  out.matching_weight = match.cost;
  out.stars = 2 * match.cost;
  return out;
}

struct OracleCaps {
  std::size_t tuple_min_rows = 14;
  std::size_t star_min_rows = 10;
};

// Minimum residue size over all per-group retention vectors in which every
// retained sub-multiset and the residue are l-eligible.
inline std::int64_t brute_force_tuple_min(const GroupedTable& groups, int l,
                                          std::size_t cap = OracleCaps{}.tuple_min_rows) {
  CheckDiversity(l);
  if (groups.rows() > cap) {
    throw InvalidArgument("tuple-min oracle is exhaustive and meant for tests; " +
                          std::to_string(groups.rows()) + " rows exceed the cap of " +
                          std::to_string(cap));
  }
  if (!is_l_eligible(groups.total_histogram(), l)) {
    throw Ineligible("tuple-min oracle: input is not l-eligible");
  }
  SaValue m = 0;
  for (const auto& g : groups.groups) {
    for (const auto& [v, c] : g.histogram.counts()) m = std::max(m, v);
  }

  // Removal vectors per group whose kept part is l-eligible, cheapest first.
  std::vector<std::vector<std::vector<std::int64_t>>> options;
  for (const auto& g : groups.groups) {
    const auto full = g.histogram.dense(static_cast<std::size_t>(m));
    std::vector<std::vector<std::int64_t>> opts;
    std::vector<std::int64_t> keep(full.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
      if (k == keep.size()) {
        std::int64_t total = 0, height = 0;
        for (auto c : keep) {
          total += c;
          height = std::max(height, c);
        }
        if (total >= l * height) {
          std::vector<std::int64_t> removed(full.size());
          for (std::size_t i = 0; i < full.size(); ++i) removed[i] = full[i] - keep[i];
          opts.push_back(std::move(removed));
        }
        return;
      }
      for (std::int64_t c = full[k]; c >= 0; --c) {
        keep[k] = c;
        rec(k + 1);
      }
    };
    rec(0);
    std::stable_sort(opts.begin(), opts.end(), [](const auto& x, const auto& y) {
      std::int64_t sx = 0, sy = 0;
      for (auto c : x) sx += c;
      for (auto c : y) sy += c;
      return sx < sy;
    });
    options.push_back(std::move(opts));
  }

  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> residue(static_cast<std::size_t>(m), 0);
  std::function<void(std::size_t, std::int64_t)> search = [&](std::size_t i,
                                                               std::int64_t size) {
    if (size >= best) return;
    if (i == options.size()) {
      std::int64_t height = 0;
      for (auto c : residue) height = std::max(height, c);
      if (size >= l * height) best = size;
      return;
    }
    for (const auto& removed : options[i]) {
      std::int64_t add = 0;
      for (std::size_t k = 0; k < removed.size(); ++k) {
        residue[k] += removed[k];
        add += removed[k];
      }
      search(i + 1, size + add);
      for (std::size_t k = 0; k < removed.size(); ++k) residue[k] -= removed[k];
    }
  };
  search(0, 0);
  if (best == std::numeric_limits<std::int64_t>::max()) {
    throw InvariantViolation("tuple-min oracle found no feasible solution");
  }
  return best;
}

// Minimum published star count over all set partitions of the rows whose
// blocks are all l-eligible.
inline std::int64_t brute_force_star_min(const MicrodataTable& table, int l,
                                         std::size_t cap = OracleCaps{}.star_min_rows) {
  CheckDiversity(l);
  const std::size_t n = table.size();
  const std::size_t d = table.d();
  if (n > cap) {
    throw InvalidArgument("star-min oracle is exhaustive and meant for tests; " +
                          std::to_string(n) + " rows exceed the cap of " +
                          std::to_string(cap));
  }
  RequireEligible(table, l);
  if (n == 0) return 0;

  struct Block {
    std::vector<RowId> rows;
    std::vector<bool> mixed;  // per attribute
    std::int64_t stars = 0;
  };
  std::vector<Block> blocks;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();

  auto eligible = [&](const Block& b) {
    SaHistogram h;
    for (RowId r : b.rows) h.add(table.sa(r));
    return is_l_eligible(h, l);
  };

  std::function<void(RowId, std::int64_t)> rec = [&](RowId r, std::int64_t stars) {
    if (stars >= best) return;
    if (r == n) {
      for (const auto& b : blocks) {
        if (!eligible(b)) return;
      }
      best = stars;
      return;
    }
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      Block saved = blocks[k];
      Block& b = blocks[k];
      std::size_t mixed = 0;
      for (std::size_t a = 0; a < d; ++a) {
        if (!b.mixed[a] && table.qi(b.rows.front(), a) != table.qi(r, a)) b.mixed[a] = true;
        mixed += b.mixed[a] ? 1 : 0;
      }
      b.rows.push_back(r);
      const std::int64_t updated = static_cast<std::int64_t>(b.rows.size() * mixed);
      const std::int64_t delta = updated - b.stars;
      b.stars = updated;
      rec(r + 1, stars + delta);
      blocks[k] = std::move(saved);
    }
    blocks.push_back(Block{{r}, std::vector<bool>(d, false), 0});
    rec(r + 1, stars);
    blocks.pop_back();
  };
  rec(0, 0);
  return best;
}

}  // namespace ldiversity

#endif  // LDIV_OPTIMAL_HPP_

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

#include "ldiv/optimal.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "ldiv/tp.hpp"
#include "test_util.hpp"

namespace ldiversity {
namespace {

// Two SA classes of `half` rows each over d attributes with `dom` values.
template <typename Rng>
MicrodataTable RandomBinaryTable(Rng& rng, std::size_t half, std::size_t d, std::size_t dom) {
  std::vector<Attribute> qi;
  for (std::size_t a = 0; a < d; ++a) {
    std::vector<std::string> labels;
    for (std::size_t v = 0; v < dom; ++v) labels.push_back("v" + std::to_string(v));
    qi.emplace_back("q" + std::to_string(a), labels);
  }
  std::vector<ValueId> cells(2 * half * d);
  for (auto& c : cells) c = static_cast<ValueId>(rng() % dom);
  std::vector<SaValue> sa(2 * half);
  for (std::size_t r = 0; r < sa.size(); ++r) sa[r] = r % 2 == 0 ? 1 : 2;
  std::shuffle(sa.begin(), sa.end(), rng);
  return MicrodataTable(Schema(qi, testing::NumericSa(2)), cells, sa);
}

MicrodataTable Permuted(const MicrodataTable& t, const std::vector<RowId>& order) {
  std::vector<ValueId> cells;
  std::vector<SaValue> sa;
  for (RowId r : order) {
    auto q = t.qi(r);
    cells.insert(cells.end(), q.begin(), q.end());
    sa.push_back(t.sa(r));
  }
  return MicrodataTable(t.schema(), cells, sa);
}

TEST(MinCostAssignment, AgreesWithPermutationSearch) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    CostMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) c.at(i, j) = static_cast<std::int64_t>(rng() % 10);
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    do {
      std::int64_t s = 0;
      for (std::size_t i = 0; i < n; ++i) s += c.at(i, perm[i]);
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const Assignment a = MinCostAssignment(c);
    EXPECT_EQ(a.cost, best);
    std::vector<std::size_t> cols = a.column_of_row;
    std::sort(cols.begin(), cols.end());
    for (std::size_t j = 0; j < n; ++j) EXPECT_EQ(cols[j], j);
  }
}

TEST(OptimalTwoDiverse, IdenticalPair) {
  const auto t = MakeTable({"a", "b"}, "s", {{"x", "y", "1"}, {"x", "y", "2"}});
  const auto sol = optimal_two_diverse(t);
  EXPECT_EQ(sol.pairs.groups.size(), 1u);
  EXPECT_EQ(sol.stars, 0);
}

TEST(OptimalTwoDiverse, PicksTheCheaperMatching) {
  const auto t = MakeTable({"a", "b"}, "s",
                           {{"a", "x", "1"}, {"b", "y", "1"}, {"a", "x", "2"}, {"b", "x", "2"}});
  const auto sol = optimal_two_diverse(t);
  EXPECT_EQ(sol.matching_weight, 1);
  EXPECT_EQ(sol.stars, 2);
  ASSERT_EQ(sol.pairs.groups.size(), 2u);
  EXPECT_EQ(sol.pairs.groups[0], (std::vector<RowId>{0, 2}));
  EXPECT_EQ(sol.pairs.groups[1], (std::vector<RowId>{1, 3}));
}

TEST(OptimalTwoDiverse, Errors) {
  EXPECT_THROW(optimal_two_diverse(testing::HospitalTable()), Error);
  const auto lopsided = MakeTable({"a"}, "s", {{"x", "1"}, {"y", "1"}, {"z", "2"}});
  try {
    optimal_two_diverse(lopsided);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIneligible);
  }
}

TEST(OptimalTwoDiverse, MatchesStarOracle) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const auto t = RandomBinaryTable(rng, 1 + rng() % 4, 1 + rng() % 3, 2 + rng() % 2);
    const auto sol = optimal_two_diverse(t);
    EXPECT_EQ(sol.stars, brute_force_star_min(t, 2));
    for (const auto& g : sol.pairs.groups) {
      ASSERT_EQ(g.size(), 2u);
      EXPECT_NE(t.sa(g[0]), t.sa(g[1]));
    }
  }
}

TEST(OptimalTwoDiverse, InvariantUnderRowOrder) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = RandomBinaryTable(rng, 2 + rng() % 5, 3, 3);
    std::vector<RowId> order(t.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    EXPECT_EQ(optimal_two_diverse(t).matching_weight,
              optimal_two_diverse(Permuted(t, order)).matching_weight);
  }
}

TEST(TupleMin, ZeroWhenGroupsAreEligible) {
  EXPECT_EQ(brute_force_tuple_min(group_by_qi(testing::TableFromGroups({{1, 1}, {2, 2}})), 2), 0);
}

TEST(TupleMin, PhaseTwoInstance) {
  const auto t = testing::TableFromGroups({{3, 1, 1, 2, 3}, {0, 2, 2, 4, 4}, {4, 4, 0, 0, 0}});
  const std::int64_t opt = brute_force_tuple_min(group_by_qi(t), 3, 30);
  EXPECT_GE(opt, 4);
  EXPECT_LE(run_tp(t, 3).report.residue_size, 3 * opt);
}

TEST(TupleMin, CapAndEligibility) {
  const auto big = testing::TableFromGroups({{8, 8}});
  EXPECT_THROW(brute_force_tuple_min(group_by_qi(big), 2), Error);
  EXPECT_EQ(brute_force_tuple_min(group_by_qi(big), 2, 16), 0);
  EXPECT_THROW(brute_force_tuple_min(group_by_qi(testing::TableFromGroups({{3, 1}})), 2), Error);
}

TEST(StarMin, IdenticalBlockNeedsNoStars) {
  const auto t = MakeTable({"a"}, "s", {{"x", "1"}, {"x", "2"}, {"x", "3"}});
  EXPECT_EQ(brute_force_star_min(t, 3), 0);
}

TEST(StarMin, CapExceeded) {
  std::mt19937_64 rng(1);
  const auto t = testing::RandomTable(rng, 11, 2, 2, 3, 2);
  EXPECT_THROW(brute_force_star_min(t, 2), Error);
}

TEST(StarMin, BoundsTheThreePhaseOutput) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const auto t = testing::RandomTable(rng, 9, 2, 2, 3, 3);
    const std::int64_t opt = brute_force_star_min(t, 3);
    const auto r = run_tp(t, 3);
    std::int64_t stars = 0;
    for (RowId row : r.residue) {
      for (std::size_t a = 0; a < t.d(); ++a) {
        bool same = true;
        for (RowId other : r.residue) same = same && t.qi(other, a) == t.qi(row, a);
        stars += same ? 0 : 1;
      }
    }
    EXPECT_LE(stars, 3 * static_cast<std::int64_t>(t.d()) * opt);
  }
}

}  // namespace
}  // namespace ldiversity

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

#include "ldiv/gadget.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>
#include <vector>

#include "test_util.hpp"

namespace ldiversity {
namespace {

// Rows' published QI cells for a group, and whether the group keeps any.
bool Useful(const SuppressedTable& st, const std::vector<RowId>& group) {
  for (RowId r : group) {
    for (std::size_t a = 0; a < st.d(); ++a) {
      if (!st.is_star(r, a)) return true;
    }
  }
  return false;
}

// Returns how many useful groups were checked.
int CheckUsefulGroups(const MicrodataTable& t, const Partition& p) {
  const SuppressedTable st = materialize(t, p);
  const auto d = static_cast<std::int64_t>(t.d());
  int useful = 0;
  for (const auto& g : p.groups) {
    if (!Useful(st, g)) continue;
    ++useful;
    std::int64_t stars = 0, zeros = 0;
    for (RowId r : g) {
      for (std::size_t a = 0; a < t.d(); ++a) {
        if (st.is_star(r, a)) {
          ++stars;
        } else {
          EXPECT_EQ(st.cell(r, a), 0);
          ++zeros;
        }
      }
    }
    EXPECT_EQ(g.size(), 3u);
    EXPECT_EQ(stars, 3 * (d - 1));
    EXPECT_EQ(zeros, 3);
  }
  return useful;
}

TEST(BuildReduction, ExampleInstance) {
  const auto inst = ExampleReductionInstance();
  const auto t = build_reduction(inst);
  ASSERT_EQ(t.size(), 12u);
  ASSERT_EQ(t.d(), 6u);
  // Row 7 stands for coordinate c of the second dimension, used only by p3.
  const RowId row = 6;
  EXPECT_EQ(t.schema().sa_label(t.sa(row)), "7");
  for (std::size_t a = 0; a < 6; ++a) {
    EXPECT_EQ(t.schema().qi(a).label(t.qi(row, a)), a == 2 ? "0" : "7");
  }
  EXPECT_EQ(t.sa_histogram().distinct(), 8u);
  EXPECT_TRUE(is_l_eligible(t.sa_histogram(), 3));
}

TEST(BuildReduction, ThreeZerosPerColumn) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    ReductionInstance inst;
    inst.n = 2 + rng() % 4;
    inst.m = 3 + rng() % (3 * inst.n - 2);
    std::set<std::array<std::size_t, 3>> pts;
    const std::size_t d = inst.n + rng() % 4;
    while (pts.size() < d) pts.insert({rng() % inst.n, rng() % inst.n, rng() % inst.n});
    inst.points.assign(pts.begin(), pts.end());
    const auto t = build_reduction(inst);
    for (std::size_t a = 0; a < t.d(); ++a) {
      int zeros = 0;
      for (RowId r = 0; r < t.size(); ++r) zeros += t.qi(r, a) == 0 ? 1 : 0;
      EXPECT_EQ(zeros, 3);
    }
    EXPECT_EQ(t.sa_histogram().distinct(), inst.m);
    EXPECT_TRUE(is_l_eligible(t.sa_histogram(), 3));
    for (RowId x = 0; x < t.size(); ++x) {
      for (RowId y = 0; y < t.size(); ++y) {
        if (x / inst.n != y / inst.n) {
          EXPECT_NE(t.sa(x), t.sa(y));
        }
      }
    }
  }
}

TEST(BuildReduction, LargestAlphabetIsTheIdentity) {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t j = 1; j <= 3 * n; ++j) EXPECT_EQ(ReductionSaValue(j, n, 3 * n), j);
  }
}

TEST(BuildReduction, RejectsBadInstances) {
  auto inst = ExampleReductionInstance();
  inst.m = 13;
  EXPECT_THROW(build_reduction(inst), Error);
  inst.m = 2;
  EXPECT_THROW(build_reduction(inst), Error);
  inst = ExampleReductionInstance();
  inst.points.push_back(inst.points.front());
  EXPECT_THROW(build_reduction(inst), Error);
}

TEST(MatchingToPartition, MeetsTheBoundExactly) {
  const auto inst = ExampleReductionInstance();
  const auto t = build_reduction(inst);
  const Partition p = matching_to_partition(inst, {0, 2, 4, 5}, t);
  ASSERT_EQ(p.groups.size(), 4u);
  EXPECT_TRUE(IsLDiverse(t, p, 3));
  EXPECT_EQ(count_stars(materialize(t, p)), 60);
  EXPECT_EQ(CheckUsefulGroups(t, p), 4);
}

TEST(MatchingToPartition, CollisionIsReported) {
  const auto inst = ExampleReductionInstance();
  const auto t = build_reduction(inst);
  try {
    matching_to_partition(inst, {0, 1, 4, 5}, t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("p1 and p2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(matching_to_partition(inst, {0, 2, 4}, t), Error);
}

TEST(LowerBound, SampledPartitions) {
  const auto t = build_reduction(ExampleReductionInstance());
  std::int64_t lowest = 0;
  EXPECT_TRUE(verify_lower_bound(t, 1000, 7, &lowest));
  EXPECT_GE(lowest, 60);
  EXPECT_TRUE(verify_lower_bound(t, 0));
}

TEST(LowerBound, UsefulGroupsOfSampledPartitions) {
  const auto t = build_reduction(ExampleReductionInstance());
  std::mt19937_64 rng(11);
  int useful = 0;
  for (int s = 0; s < 300; ++s) {
    const Partition p = sample_diverse_partition(t, 3, rng);
    ASSERT_TRUE(IsLDiverse(t, p, 3));
    useful += CheckUsefulGroups(t, p);
  }
  EXPECT_GT(useful, 0);
}

}  // namespace
}  // namespace ldiversity

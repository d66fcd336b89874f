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

#include "ldiv/model.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "test_util.hpp"

namespace ldiversity {
namespace {

TEST(GroupByQi, HospitalTableHasFiveClasses) {
  const GroupedTable g = group_by_qi(testing::HospitalTable());
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.groups[0].rows, (std::vector<RowId>{0, 1}));
  EXPECT_EQ(g.groups[1].rows, (std::vector<RowId>{2}));
  EXPECT_EQ(g.groups[2].rows, (std::vector<RowId>{3}));
  EXPECT_EQ(g.groups[3].rows, (std::vector<RowId>{4, 5, 6, 7}));
  EXPECT_EQ(g.groups[4].rows, (std::vector<RowId>{8, 9}));
}

TEST(GroupByQi, SingleClass) {
  const auto t = MakeTable({"a"}, "s", {{"x", "1"}, {"x", "2"}, {"x", "1"}});
  const GroupedTable g = group_by_qi(t);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.groups[0].rows.size(), 3u);
}

TEST(GroupByQi, AllDistinct) {
  const auto t = MakeTable({"a", "b"}, "s",
                           {{"x", "y", "1"}, {"x", "z", "2"}, {"w", "y", "1"}});
  EXPECT_EQ(group_by_qi(t).size(), 3u);
}

TEST(GroupByQi, HistogramUnionMatchesTable) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = testing::RandomTable(rng, 30, 2, 3, 4, 1);
    const GroupedTable g = group_by_qi(t);
    EXPECT_LE(g.size(), t.size());
    EXPECT_EQ(g.total_histogram(), t.sa_histogram());
    EXPECT_EQ(g.rows(), t.size());
    for (const auto& grp : g.groups) {
      for (RowId r : grp.rows) {
        auto q = t.qi(r);
        EXPECT_TRUE(std::equal(q.begin(), q.end(), grp.key.begin()));
      }
    }
  }
}

TEST(Eligibility, Examples) {
  EXPECT_TRUE(is_l_eligible(SaHistogram::FromCounts({3, 1, 1, 2, 3}), 3));
  EXPECT_TRUE(is_l_eligible(SaHistogram(), 1));
  EXPECT_TRUE(is_l_eligible(SaHistogram(), 7));
  EXPECT_FALSE(is_l_eligible(SaHistogram::FromCounts({2, 1}), 2));
  EXPECT_THROW(is_l_eligible(SaHistogram(), 0), Error);
}

TEST(Gap, Examples) {
  EXPECT_EQ(gap(SaHistogram::FromCounts({4, 4, 4, 0, 0}), 4), 4);
  EXPECT_EQ(gap(SaHistogram(), 5), 0);
  EXPECT_EQ(gap(SaHistogram::FromCounts({4, 4, 2, 1, 1}), 3), 0);
}

TEST(Pillars, Examples) {
  EXPECT_EQ(pillars(SaHistogram::FromCounts({3, 1, 1, 2, 3})), (std::vector<SaValue>{1, 5}));
  EXPECT_EQ(pillars(SaHistogram::FromCounts({4, 4, 0, 0, 0})), (std::vector<SaValue>{1, 2}));
  EXPECT_EQ(pillars(SaHistogram::FromCounts({1, 0, 0})), (std::vector<SaValue>{1}));
  EXPECT_THROW(pillars(SaHistogram()), Error);
}

TEST(SaHistogram, StoresOnlyNonzeroCounts) {
  SaHistogram h = SaHistogram::FromCounts({0, 2, 0});
  EXPECT_EQ(h.distinct(), 1u);
  EXPECT_EQ(h.count(1), 0);
  h.remove(2, 2);
  EXPECT_TRUE(h.empty());
  EXPECT_THROW(h.remove(2), Error);
}

// Union of disjoint l-eligible multisets stays l-eligible.
TEST(Eligibility, MonotoneUnderUnion) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> count(0, 6);
  int checked = 0;
  while (checked < 2000) {
    const int l = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<std::int64_t> a(5), b(5);
    for (auto& c : a) c = count(rng);
    for (auto& c : b) c = count(rng);
    const auto ha = SaHistogram::FromCounts(std::span<const std::int64_t>(a));
    const auto hb = SaHistogram::FromCounts(std::span<const std::int64_t>(b));
    if (!is_l_eligible(ha, l) || !is_l_eligible(hb, l)) continue;
    EXPECT_TRUE(is_l_eligible(ha + hb, l));
    ++checked;
  }
}

TEST(Schema, RejectsBadShapes) {
  EXPECT_THROW(Schema({}, Attribute("s", {"1"})), Error);
  EXPECT_THROW(Schema({Attribute("a", {"x"}), Attribute("a", {"y"})}, Attribute("s", {"1"})),
               Error);
  EXPECT_THROW(Attribute("a", {}), Error);
  EXPECT_THROW(Attribute("a", {"x", "x"}), Error);
}

TEST(MicrodataTable, RejectsOutOfDomainCells) {
  Schema schema({Attribute("a", {"x"})}, Attribute("s", {"1", "2"}));
  EXPECT_THROW(MicrodataTable(schema, {1}, {1}), Error);
  EXPECT_THROW(MicrodataTable(schema, {0}, {3}), Error);
  EXPECT_NO_THROW(MicrodataTable(schema, {0}, {2}));
}

TEST(RequireEligible, NamesTheOverFrequentValue) {
  const auto t = MakeTable({"a"}, "disease", {{"x", "flu"}, {"y", "flu"}, {"z", "cold"}});
  try {
    RequireEligible(t, 2);
    FAIL() << "expected an eligibility error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIneligible);
    EXPECT_NE(std::string(e.what()).find("flu"), std::string::npos);
  }
}

}  // namespace
}  // namespace ldiversity

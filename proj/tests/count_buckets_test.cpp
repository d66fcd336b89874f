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

#include "ldiv/count_buckets.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

namespace ldiversity {
namespace {

TEST(CountBuckets, TracksPillarAndSlots) {
  CountBuckets b(4, 3);
  b.increment(1);
  b.increment(1);
  b.increment(3);
  EXPECT_EQ(b.height(), 2);
  EXPECT_EQ(b.total(), 3);
  ASSERT_EQ(b.pillars().size(), 1u);
  EXPECT_EQ(b.pillars()[0], 1u);
  b.decrement(1);
  EXPECT_EQ(b.height(), 1);
  EXPECT_EQ(b.pillars().size(), 2u);
  EXPECT_THROW(b.decrement(0), Error);
}

TEST(CountBuckets, GrowsPastInitialCapacity) {
  CountBuckets b(2, 1);
  for (int i = 0; i < 10; ++i) b.increment(0);
  EXPECT_EQ(b.height(), 10);
}

// Random walk against a plain count vector.
TEST(CountBuckets, AgreesWithNaiveCounts) {
  std::mt19937_64 rng(3);
  const std::size_t keys = 6;
  CountBuckets b(keys, 4);
  std::vector<std::int64_t> naive(keys, 0);
  for (int step = 0; step < 5000; ++step) {
    const std::size_t k = std::uniform_int_distribution<std::size_t>(0, keys - 1)(rng);
    if (naive[k] > 0 && rng() % 2 == 0) {
      b.decrement(k);
      --naive[k];
    } else {
      b.increment(k);
      ++naive[k];
    }
    const std::int64_t h = *std::max_element(naive.begin(), naive.end());
    ASSERT_EQ(b.height(), h);
    std::vector<std::size_t> expect;
    for (std::size_t i = 0; i < keys; ++i) {
      if (h > 0 && naive[i] == h) expect.push_back(i);
    }
    std::vector<std::size_t> got(b.pillars().begin(), b.pillars().end());
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got, expect);
    for (std::size_t j = 1; j <= static_cast<std::size_t>(h); ++j) {
      for (std::size_t k2 : b.slot(j)) ASSERT_EQ(naive[k2], static_cast<std::int64_t>(j));
    }
  }
}

}  // namespace
}  // namespace ldiversity

// Copyright 2026 The wpirlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wpir/rng.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

namespace wpir {
namespace {

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  std::vector<std::uint64_t> xa, xb, xc;
  for (int i = 0; i < 16; ++i) {
    xa.push_back(a.Next());
    xb.push_back(b.Next());
    xc.push_back(c.Next());
  }
  EXPECT_EQ(xa, xb);
  EXPECT_NE(xa, xc);
}

TEST(RngTest, SplitMix64ReferenceValue) {
  // First output of the reference SplitMix64 generator seeded with 0.
  EXPECT_EQ(Rng::SplitMix64(0), 0xE220A8397B1DCDAFull);
}

TEST(RngTest, SubstreamsAreStableAndDistinct) {
  const Rng root(7);
  EXPECT_EQ(root.Substream("m_prime").seed(), Rng(7).Substream("m_prime").seed());
  EXPECT_NE(root.Substream("m_prime").seed(), root.Substream("decoys").seed());
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) seeds.insert(root.Substream(i).seed());
  EXPECT_EQ(seeds.size(), 1000u);
  // Drawing from the parent does not move its substreams.
  Rng moved(7);
  moved.Next();
  EXPECT_EQ(moved.Substream(3).seed(), root.Substream(3).seed());
}

TEST(RngTest, UniformIntRangeAndFrequencies) {
  Rng rng(1);
  EXPECT_THROW(rng.UniformInt(0), std::invalid_argument);
  const int n = 6;
  const int draws = 60000;
  std::vector<int> counts(n, 0);
  for (int i = 0; i < draws; ++i) {
    const auto x = rng.UniformInt(n);
    ASSERT_LT(x, static_cast<std::uint64_t>(n));
    ++counts[x];
  }
  // Chi-square with 5 degrees of freedom; 20.5 is the 0.999 quantile.
  const double expected = static_cast<double>(draws) / n;
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 20.5);
}

TEST(RngTest, UniformRealInUnitInterval) {
  Rng rng(5);
  double sum = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.UniformReal();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 10000, 0.5, 0.02);
}

TEST(RngTest, PermutationIsUniformOverS3) {
  Rng rng(9);
  std::map<std::vector<std::uint32_t>, int> counts;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    auto p = rng.Permutation(3);
    std::vector<std::uint32_t> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    ASSERT_EQ(sorted, (std::vector<std::uint32_t>{0, 1, 2}));
    ++counts[p];
  }
  ASSERT_EQ(counts.size(), 6u);
  const double expected = draws / 6.0;
  double chi2 = 0;
  for (const auto& [p, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 20.5);
}

TEST(RngTest, SubsetSortedDistinct) {
  Rng rng(11);
  EXPECT_THROW(rng.Subset(2, 3), std::invalid_argument);
  for (int i = 0; i < 100; ++i) {
    const auto s = rng.Subset(10, 4);
    ASSERT_EQ(s.size(), 4u);
    EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
    EXPECT_EQ(std::set<std::uint32_t>(s.begin(), s.end()).size(), 4u);
    EXPECT_LT(s.back(), 10u);
  }
  EXPECT_TRUE(rng.Subset(5, 0).empty());
}

}  // namespace
}  // namespace wpir

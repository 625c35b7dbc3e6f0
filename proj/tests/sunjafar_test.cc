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

#include "wpir/sunjafar.h"

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <vector>

#include "wpir/core.h"
#include "wpir/rng.h"
#include "wpir/setting.h"

namespace wpir {
namespace {

// Answer oracle: one symbol per combination, summed term by term straight
// from the library (segments are single symbols when L = N^M).
std::vector<Symbol> DirectAnswer(const QueryToken& q, const FileLibrary& lib) {
  const Field& f = *lib.field();
  std::vector<Symbol> out;
  for (const Combination& c : q.combinations()) {
    Symbol s = 0;
    for (const Term& t : c) s = f.Add(s, f.Mul(t.coeff, lib.file(t.file)[t.segment - 1]));
    out.push_back(s);
  }
  return out;
}

std::uint64_t Choose(int n, int k) {
  std::uint64_t c = 1;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

std::uint64_t Power(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

TEST(SjQueryTest, TwoServersTwoFiles) {
  Rng rng(3);
  const SjRandomness rand = SampleSjRandomness(2, 2, rng);
  const auto q = SjQuery(2, 2, 1, rand);
  ASSERT_EQ(q.size(), 2u);
  for (const QueryToken& t : q) {
    ASSERT_EQ(t.combinations().size(), 3u);
    int singles = 0, pairs = 0;
    std::set<int> singleton_files;
    for (const Combination& c : t.combinations()) {
      if (c.size() == 1) {
        ++singles;
        singleton_files.insert(c[0].file);
      }
      if (c.size() == 2) {
        ++pairs;
        EXPECT_NE(c[0].file, c[1].file);
      }
    }
    EXPECT_EQ(singles, 2);
    EXPECT_EQ(pairs, 1);
    EXPECT_EQ(singleton_files, (std::set<int>{1, 2}));
  }
}

TEST(SjQueryTest, CombinationProfilePerServer) {
  for (int n = 2; n <= 4; ++n) {
    for (int m = 1; m <= 3; ++m) {
      Rng rng(n * 10 + m);
      const SjRandomness rand = SampleSjRandomness(n, m, rng);
      for (int theta = 1; theta <= m; ++theta) {
        const auto q = SjQuery(n, m, theta, rand);
        ASSERT_EQ(q.size(), static_cast<std::size_t>(n));
        for (const QueryToken& t : q) {
          std::map<std::size_t, std::uint64_t> by_size;
          std::map<int, std::set<std::uint32_t>> used;
          for (const Combination& c : t.combinations()) {
            ++by_size[c.size()];
            for (const Term& term : c) {
              EXPECT_EQ(term.coeff, 1u);
              // No segment is requested twice from one server.
              EXPECT_TRUE(used[term.file].insert(term.segment).second);
            }
          }
          for (int s = 1; s <= m; ++s) {
            EXPECT_EQ(by_size[s], Choose(m, s) * Power(n - 1, s - 1))
                << "N=" << n << " M=" << m << " s=" << s;
          }
        }
      }
    }
  }
}

TEST(SjDownloadTest, Totals) {
  EXPECT_EQ(SjDownloadTotal(2, 2), 6u);
  EXPECT_EQ(SjDownloadTotal(3, 2), 12u);
  for (int n = 2; n <= 5; ++n) EXPECT_EQ(SjDownloadTotal(n, 1), static_cast<std::uint64_t>(n));
  // Rate L / D equals the capacity.
  for (int n = 2; n <= 4; ++n) {
    for (int m = 1; m <= 4; ++m) {
      EXPECT_EQ(Rational(Power(n, m), SjDownloadTotal(n, m)),
                Capacity(PirSetting::Replicated(n, m)));
    }
  }
}

TEST(SjAnswerTest, MatchesDirectOracle) {
  const FileLibrary lib = GenerateLibrary(2, 4, Field::Default(), 17);
  Rng rng(4);
  const SjRandomness rand = SampleSjRandomness(2, 2, rng);
  for (const QueryToken& q : SjQuery(2, 2, 2, rand)) {
    const AnswerString a = SjAnswer(q, lib, 2);
    EXPECT_EQ(a.symbols, DirectAnswer(q, lib));
    EXPECT_EQ(a.symbols.size(), 3u);
  }
}

struct SjCase {
  int n;
  int m;
  int seeds;
};

class SjRoundTripTest : public ::testing::TestWithParam<SjCase> {};

TEST_P(SjRoundTripTest, DecodesExactly) {
  const auto [n, m, seeds] = GetParam();
  const FieldPtr f = Field::Default();
  int exact = 0;
  for (int seed = 0; seed < seeds; ++seed) {
    const FileLibrary lib = GenerateLibrary(m, Power(n, m), f, 1000 + seed);
    Rng rng(seed);
    const SjRandomness rand = SampleSjRandomness(n, m, rng);
    const int theta = 1 + static_cast<int>(rng.UniformInt(m));
    std::vector<AnswerString> answers;
    std::uint64_t total = 0;
    for (const QueryToken& q : SjQuery(n, m, theta, rand)) {
      answers.push_back(SjAnswer(q, lib, n));
      total += answers.back().symbols.size();
    }
    EXPECT_EQ(total, SjDownloadTotal(n, m));
    const auto decoded = SjDecode(n, m, theta, rand, answers, *f);
    const auto truth = lib.file(theta);
    exact += std::equal(decoded.begin(), decoded.end(), truth.begin(), truth.end());
  }
  EXPECT_EQ(exact, seeds);
}

INSTANTIATE_TEST_SUITE_P(Settings, SjRoundTripTest,
                         ::testing::Values(SjCase{2, 1, 10}, SjCase{2, 2, 100},
                                           SjCase{3, 2, 100}, SjCase{2, 3, 50},
                                           SjCase{3, 3, 20}, SjCase{4, 2, 20}));

TEST(SjRoundTripTest, LongerFilesUseBlocks) {
  // L = 3 N^M: each segment is a block of 3 symbols.
  const FieldPtr f = Field::Prime(11);
  const FileLibrary lib = GenerateLibrary(2, 12, f, 5);
  Rng rng(8);
  const SjRandomness rand = SampleSjRandomness(2, 2, rng);
  std::vector<AnswerString> answers;
  for (const QueryToken& q : SjQuery(2, 2, 1, rand)) answers.push_back(SjAnswer(q, lib, 2));
  const auto decoded = SjDecode(2, 2, 1, rand, answers, *f);
  EXPECT_TRUE(std::equal(decoded.begin(), decoded.end(), lib.file(1).begin(),
                         lib.file(1).end()));
}

TEST(SjRoundTripTest, TamperingChangesOutput) {
  const FieldPtr f = Field::Default();
  const FileLibrary lib = GenerateLibrary(2, 9, f, 1);
  Rng rng(2);
  const SjRandomness rand = SampleSjRandomness(3, 2, rng);
  std::vector<AnswerString> answers;
  for (const QueryToken& q : SjQuery(3, 2, 2, rand)) answers.push_back(SjAnswer(q, lib, 3));
  answers[1].symbols[0] ^= 0x01;
  const auto decoded = SjDecode(3, 2, 2, rand, answers, *f);
  EXPECT_FALSE(std::equal(decoded.begin(), decoded.end(), lib.file(2).begin(),
                          lib.file(2).end()));
}

TEST(SjQueryTest, RejectsBadTheta) {
  Rng rng(1);
  const SjRandomness rand = SampleSjRandomness(2, 2, rng);
  EXPECT_THROW(SjQuery(2, 2, 0, rand), std::invalid_argument);
  EXPECT_THROW(SjQuery(2, 2, 3, rand), std::invalid_argument);
  const std::vector<int> files = {1, 3};
  EXPECT_THROW(SjQueryOn(2, files, 2, rand), std::invalid_argument);
}

}  // namespace
}  // namespace wpir

// Copyright 2026 The qsdc-sim Authors
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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "qsdc/random.hpp"
#include "qsdc/stats.hpp"

namespace qsdc {
namespace {

TEST(Random, SameSeedSameStream) {
  RandomSource a(42);
  RandomSource b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Random, Mix64IsSplitMix64) {
  // First SplitMix64 output for state 0.
  EXPECT_EQ(mix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(Random, EngineIsMt19937SeededByMix) {
  RandomSource r(5489);
  std::mt19937_64 ref(mix64(5489));
  for (int i = 0; i < 10; ++i) EXPECT_EQ(r.next_u64(), ref());
}

TEST(Random, Uniform01InRange) {
  RandomSource r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Random, BelowIsUnbiasedAndBounded) {
  RandomSource r(2);
  std::array<int, 3> counts{};
  constexpr int kDraws = 30000;
  for (int i = 0; i < kDraws; ++i) ++counts.at(r.below(3));
  for (int c : counts) {
    EXPECT_TRUE(within_binomial_band(static_cast<double>(c) / kDraws, 1.0 / 3, kDraws, 4.0));
  }
}

TEST(Random, PermutationIsAPermutation) {
  RandomSource r(3);
  auto p = r.permutation(100);
  std::sort(p.begin(), p.end());
  std::vector<std::size_t> id(100);
  std::iota(id.begin(), id.end(), 0);
  EXPECT_EQ(p, id);
}

TEST(Random, SampleIsSortedDistinct) {
  RandomSource r(4);
  const auto s = r.sample(50, 20);
  EXPECT_EQ(s.size(), 20u);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 20u);
  EXPECT_LT(s.back(), 50u);
}

TEST(Random, SplitStreamsDiffer) {
  RandomSource r(7);
  RandomSource a = r.split();
  RandomSource b = r.split();
  EXPECT_NE(a.seed(), b.seed());
  EXPECT_NE(a.next_u64(), b.next_u64());
}

TEST(Random, DeriveSeedSeparatesIndices) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(99, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(derive_seed(99, 5), derive_seed(99, 5));
}

TEST(Random, BernoulliExtremes) {
  RandomSource r(8);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_FALSE(r.bernoulli(0.0));
    EXPECT_TRUE(r.bernoulli(1.0));
  }
}

}  // namespace
}  // namespace qsdc

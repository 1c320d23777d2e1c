// Copyright 2026 The linkguard Authors.
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

#include "linkguard/baseline.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace linkguard::baseline {
namespace {

// Counts permutations of n elements by number of fixed points.
std::vector<unsigned long> fixed_point_counts(unsigned n) {
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::vector<unsigned long> counts(n + 1, 0);
  do {
    unsigned fixed = 0;
    for (unsigned i = 0; i < n; ++i) fixed += perm[i] == i;
    ++counts[fixed];
  } while (std::next_permutation(perm.begin(), perm.end()));
  return counts;
}

TEST(Baseline, SinglePermutation) {
  EXPECT_EQ(exact_match_probability(1, 1), mpq_class(1));
  EXPECT_DOUBLE_EQ(exact_match_pmf(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(exact_match_pmf(1, 0), 0.0);
}

TEST(Baseline, ThreeElementsMatchEnumeration) {
  // 6 permutations: 2 derangements, 3 transpositions, 1 identity.
  EXPECT_EQ(exact_match_probability(3, 0), mpq_class(1, 3));
  EXPECT_EQ(exact_match_probability(3, 1), mpq_class(1, 2));
  EXPECT_EQ(exact_match_probability(3, 2), mpq_class(0));
  EXPECT_EQ(exact_match_probability(3, 3), mpq_class(1, 6));
}

TEST(Baseline, FourElementsExactlyTwo) { EXPECT_EQ(exact_match_probability(4, 2), mpq_class(1, 4)); }

TEST(Baseline, AgreesWithBruteForceUpToEight) {
  for (unsigned n = 1; n <= 8; ++n) {
    const auto counts = fixed_point_counts(n);
    const mpz_class total = factorial(n);
    for (unsigned r = 0; r <= n; ++r) {
      mpq_class expected(mpz_class(counts[r]), total);
      expected.canonicalize();
      EXPECT_EQ(exact_match_probability(n, r), expected) << "n=" << n << " r=" << r;
    }
  }
}

TEST(Baseline, RejectsOutOfRange) {
  EXPECT_THROW(exact_match_pmf(3, 4), ArgumentError);
  EXPECT_THROW(exact_match_pmf(3, -1), ArgumentError);
  EXPECT_THROW(exact_match_pmf(0, 0), ArgumentError);
}

TEST(Baseline, SmallTables) {
  EXPECT_EQ(pmf_table(1).probs, (std::vector<double>{0.0, 1.0}));
  EXPECT_EQ(pmf_table(2).probs, (std::vector<double>{0.5, 0.0, 0.5}));
}

TEST(Baseline, TableInvariants) {
  for (unsigned n : {2u, 3u, 7u, 20u, 90u, 250u, 1000u}) {
    const auto t = pmf_table(n);
    ASSERT_EQ(t.probs.size(), n + 1);
    double sum = 0.0;
    for (double p : t.probs) sum += p;
    EXPECT_NEAR(sum, 1.0, 1e-12) << n;
    EXPECT_EQ(t.probs[n - 1], 0.0) << n;
  }
}

TEST(Baseline, TableCap) {
  EXPECT_THROW(pmf_table(10001), CapacityError);
  EXPECT_THROW(pmf_table(50, 40), CapacityError);
  EXPECT_NO_THROW(pmf_table(10000));
}

TEST(Baseline, ProbabilityOfNoMatchApproachesInverseE) {
  for (unsigned n = 12; n <= 40; ++n) EXPECT_LT(std::abs(pmf_table(n).probs[0] - std::exp(-1.0)), 1e-6) << n;
}

TEST(Baseline, Moments) {
  const auto one = exact_match_moments(1);
  EXPECT_EQ(one.mean, 1.0);
  EXPECT_EQ(one.variance, 0.0);
  const auto five = exact_match_moments(5);
  EXPECT_EQ(five.mean, 1.0);
  EXPECT_EQ(five.variance, 1.0);
  EXPECT_EQ(exact_match_moments(90).mean, 1.0);
}

TEST(Baseline, MomentsOfFiveMatchBruteForce) {
  const auto counts = fixed_point_counts(5);
  double mean = 0.0;
  double second = 0.0;
  for (unsigned r = 0; r <= 5; ++r) {
    mean += r * counts[r] / 120.0;
    second += r * r * counts[r] / 120.0;
  }
  EXPECT_DOUBLE_EQ(mean, 1.0);
  EXPECT_DOUBLE_EQ(second - mean * mean, 1.0);
}

TEST(Baseline, RatioToDoubleRoundsCorrectly) {
  EXPECT_EQ(ratio_to_double(1, 3), 1.0 / 3.0);
  EXPECT_EQ(ratio_to_double(2, 3), 2.0 / 3.0);
  EXPECT_EQ(ratio_to_double(1, 10), 0.1);
  EXPECT_EQ(ratio_to_double(7, 1), 7.0);
  // 2^60 + 1 over 1 is not representable; nearest double is 2^60.
  mpz_class big = 1;
  big <<= 60;
  EXPECT_EQ(ratio_to_double(big + 1, 1), std::ldexp(1.0, 60));
}

}  // namespace
}  // namespace linkguard::baseline

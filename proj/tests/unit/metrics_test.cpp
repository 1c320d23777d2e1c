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

#include <gtest/gtest.h>

#include <cmath>

#include "linkguard/corpus/corpus.hpp"
#include "linkguard/disclosure/metrics.hpp"
#include "linkguard/disclosure/rumap.hpp"

namespace linkguard::disclosure {
namespace {

Microtable column(const std::vector<double>& values, const std::string& name = "x") {
  Microtable t;
  t.columns = {name};
  for (std::size_t i = 0; i < values.size(); ++i) {
    t.ids.push_back("r" + std::to_string(i));
    t.rows.push_back({values[i]});
  }
  return t;
}

Microtable with_values(Microtable t, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) t.rows[i] = {values[i]};
  return t;
}

TEST(ReidentRisk, IdentityReleaseIsFullyLinkable) {
  const auto t = corpus::generate_microtable(300, 4);
  EXPECT_EQ(reident_risk(t, t), 1.0);
}

TEST(ReidentRisk, HandCountedNearestNeighbours) {
  const auto t = column({0, 10, 20});
  // 1 -> row 0 (hit); 16 -> row 2 (miss); 14 -> row 1 (miss).
  EXPECT_DOUBLE_EQ(reident_risk(t, with_values(t, {1, 16, 14})), 1.0 / 3.0);
  // 5 sits halfway between rows 0 and 1: a tie scores as a miss.
  EXPECT_DOUBLE_EQ(reident_risk(t, with_values(t, {5, 10, 20})), 2.0 / 3.0);
}

TEST(ReidentRisk, GlobalMeanReleaseIsAtMostOneOverN) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto t = corpus::generate_microtable(150, seed);
    const auto released = microaggregate(t, t.size()).released;
    EXPECT_LE(reident_risk(t, released), 1.0 / static_cast<double>(t.size()));
  }
}

TEST(ReidentRisk, ColumnMismatchIsAnArgumentError) {
  EXPECT_THROW(reident_risk(column({1, 2}), column({1, 2}, "y")), ArgumentError);
  EXPECT_THROW(utility(column({1, 2}), column({1, 2}, "y")), ArgumentError);
}

TEST(ReidentRisk, LargerGroupsNeverRaiseRisk) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto t = corpus::generate_microtable(400, seed);
    const double r2 = reident_risk(t, microaggregate(t, 2).released);
    const double r10 = reident_risk(t, microaggregate(t, 10).released);
    EXPECT_LE(r10, r2) << "seed " << seed;
  }
}

// Identical released rows within a group leave at most one true link per group.
TEST(ReidentRisk, GroupedReleaseBoundedByGroupSize) {
  for (std::size_t k : {2u, 3u, 5u, 10u}) {
    const auto t = corpus::generate_microtable(500, 77);
    EXPECT_LE(reident_risk(t, microaggregate(t, k).released), 1.0 / static_cast<double>(k) + 1e-12) << k;
  }
}

TEST(Utility, HandComputedValues) {
  const auto t = column({0, 2});  // mean 1, sd sqrt(2)
  EXPECT_DOUBLE_EQ(utility(t, t), 1.0);
  EXPECT_DOUBLE_EQ(utility(t, with_values(t, {1, 1})), 0.5);
  const double s = std::sqrt(2.0);
  EXPECT_DOUBLE_EQ(utility(t, with_values(t, {1 + s, 1 + s})), 0.0);
  EXPECT_NEAR(utility(t, with_values(t, {0.5, 2.5})), 1.0 - 0.5 * (0.5 / s), 1e-12);
}

TEST(Utility, ZeroVarianceColumnUsesMeanShiftOnly) {
  const auto t = column({3, 3, 3});
  EXPECT_DOUBLE_EQ(utility(t, t), 1.0);
  EXPECT_DOUBLE_EQ(utility(t, with_values(t, {3.25, 3.25, 3.25})), 0.75);
  EXPECT_DOUBLE_EQ(utility(t, with_values(t, {2, 4, 3})), 1.0);
  EXPECT_DOUBLE_EQ(utility(t, with_values(t, {9, 9, 9})), 0.0);
}

TEST(Utility, NoiseSweepNonIncreasing) {
  const auto t = corpus::generate_microtable(2000, 12);
  double prev = 1.0;
  for (double lambda : {0.1, 0.5, 1.0}) {
    const double u = utility(t, perturb(t, lambda, 99));
    EXPECT_LE(u, prev) << lambda;
    prev = u;
  }
}

TEST(Perturb, IdentityDeterminismAndLawOfLargeNumbers) {
  const auto t = corpus::generate_microtable(10000, 5);
  EXPECT_EQ(perturb(t, 0.0, 1), t);
  EXPECT_EQ(perturb(t, 0.5, 42), perturb(t, 0.5, 42));
  EXPECT_NE(perturb(t, 0.5, 42), perturb(t, 0.5, 43));
  const auto released = perturb(t, 0.5, 42);
  const auto a = column_stats(t);
  const auto b = column_stats(released);
  for (std::size_t c = 0; c < t.width(); ++c)
    EXPECT_LT(std::abs(b.mean[c] - a.mean[c]), 4.0 * a.sd[c] / std::sqrt(10000.0)) << t.columns[c];
  EXPECT_THROW(perturb(t, -1.0, 1), ArgumentError);
}

TEST(RUSweep, MicroaggregationGridMonotone) {
  const auto t = corpus::generate_microtable(600, 21);
  const auto pts = ru_sweep(t, {ReleasePlan::Method::kMicroaggregate, Stat::kMean, 0}, {2, 4, 8, 16});
  ASSERT_EQ(pts.size(), 4u);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_LE(pts[i].risk, pts[i - 1].risk);
    EXPECT_LE(pts[i].utility, pts[i - 1].utility);
  }
  for (const auto& p : pts) {
    EXPECT_GE(p.risk, 0.0);
    EXPECT_LE(p.utility, 1.0);
  }
}

TEST(RUSweep, NoiseGridIdentityEndpointAndOrdering) {
  const auto t = corpus::generate_microtable(600, 22);
  const auto pts = ru_sweep(t, {ReleasePlan::Method::kNoise, Stat::kMean, 7}, {0, 0.25, 0.5, 1});
  EXPECT_EQ(pts[0].risk, 1.0);
  EXPECT_EQ(pts[0].utility, 1.0);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    EXPECT_LE(pts[i].risk, pts[i - 1].risk);
    EXPECT_LE(pts[i].utility, pts[i - 1].utility);
  }
}

TEST(RUSweep, SinglePointAndErrors) {
  const auto t = corpus::generate_microtable(50, 1);
  EXPECT_EQ(ru_sweep(t, {ReleasePlan::Method::kNoise, Stat::kMean, 1}, {0.5}).size(), 1u);
  EXPECT_THROW(ru_sweep(t, {ReleasePlan::Method::kNoise, Stat::kMean, 1}, {}), ArgumentError);
  EXPECT_THROW(ru_sweep(t, {ReleasePlan::Method::kMicroaggregate, Stat::kMean, 1}, {2.5}), ArgumentError);
  const auto text = format_ru({{2, 0.5, 0.75}});
  EXPECT_EQ(text, "param,risk,utility\n2,0.5,0.75\n");
}

}  // namespace
}  // namespace linkguard::disclosure

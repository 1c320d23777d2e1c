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

#include "linkguard/linkage/em.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "linkguard/rng.hpp"

namespace linkguard::linkage {
namespace {

struct Planted {
  std::vector<ComparisonVector> gammas;
  std::vector<bool> is_match;
};

Planted plant(const LinkageModel& truth, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Planted out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool match = rng.bernoulli(truth.p);
    const auto& table = match ? truth.m : truth.u;
    ComparisonVector g;
    for (const auto& levels : table) {
      double x = rng.uniform();
      int level = 0;
      while (level + 1 < static_cast<int>(levels.size()) && x >= levels[level]) x -= levels[level++];
      g.levels.push_back(level);
      g.missing.push_back(false);
    }
    out.gammas.push_back(std::move(g));
    out.is_match.push_back(match);
  }
  return out;
}

// Supervised oracle: per-class level frequencies from the hidden labels.
LinkageModel label_frequencies(const Planted& data, const std::vector<std::size_t>& arities) {
  LinkageModel f;
  for (std::size_t a : arities) {
    f.m.emplace_back(a, 0.0);
    f.u.emplace_back(a, 0.0);
  }
  double matches = 0;
  for (std::size_t i = 0; i < data.gammas.size(); ++i) {
    auto& table = data.is_match[i] ? f.m : f.u;
    matches += data.is_match[i];
    for (std::size_t k = 0; k < arities.size(); ++k) table[k][data.gammas[i].levels[k]] += 1.0;
  }
  const double non = static_cast<double>(data.gammas.size()) - matches;
  for (auto& row : f.m)
    for (auto& v : row) v /= matches;
  for (auto& row : f.u)
    for (auto& v : row) v /= non;
  f.p = matches / static_cast<double>(data.gammas.size());
  return f;
}

LinkageModel three_binary_truth() {
  LinkageModel t;
  t.p = 0.3;
  t.m = {{0.05, 0.95}, {0.1, 0.9}, {0.15, 0.85}};
  t.u = {{0.9, 0.1}, {0.8, 0.2}, {0.95, 0.05}};
  return t;
}

TEST(Em, EmptyInputIsArgumentError) {
  EXPECT_THROW(fit_em({}, LinkageModel::initial(std::vector<std::size_t>{2})), ArgumentError);
}

TEST(Em, RecoversPlantedParametersAcrossSeeds) {
  const auto truth = three_binary_truth();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto data = plant(truth, 2000, seed);
    const auto oracle = label_frequencies(data, {2, 2, 2});
    const auto fitted = fit_em(data.gammas, LinkageModel::initial(std::vector<std::size_t>{2, 2, 2}));
    for (std::size_t f = 0; f < 3; ++f)
      for (std::size_t l = 0; l < 2; ++l) {
        EXPECT_NEAR(fitted.m[f][l], oracle.m[f][l], 0.05) << "seed " << seed << " feature " << f;
        EXPECT_NEAR(fitted.u[f][l], oracle.u[f][l], 0.05) << "seed " << seed << " feature " << f;
      }
  }
}

TEST(Em, LogLikelihoodNeverDecreases) {
  for (std::uint64_t seed = 10; seed < 16; ++seed) {
    const auto data = plant(three_binary_truth(), 600, seed);
    const auto trace = fit_em_traced(data.gammas, LinkageModel::initial(std::vector<std::size_t>{2, 2, 2}));
    ASSERT_EQ(trace.log_likelihood.size(), static_cast<std::size_t>(trace.iterations) + 1);
    for (std::size_t i = 1; i < trace.log_likelihood.size(); ++i)
      EXPECT_GE(trace.log_likelihood[i], trace.log_likelihood[i - 1] - 1e-9) << "iteration " << i;
  }
}

TEST(Em, LogLikelihoodMonotoneWithMultiLevelFeaturesAndMissing) {
  Rng rng(99);
  std::vector<ComparisonVector> gammas;
  for (int i = 0; i < 500; ++i) {
    ComparisonVector g;
    for (std::size_t a : {2u, 3u, 4u}) {
      g.levels.push_back(static_cast<int>(rng.below(a)));
      g.missing.push_back(rng.bernoulli(0.1));
    }
    gammas.push_back(g);
  }
  const auto trace = fit_em_traced(gammas, LinkageModel::initial(std::vector<std::size_t>{2, 3, 4}));
  for (std::size_t i = 1; i < trace.log_likelihood.size(); ++i)
    EXPECT_GE(trace.log_likelihood[i], trace.log_likelihood[i - 1] - 1e-9);
  EXPECT_NO_THROW(trace.model.validate());
}

// Every pair agrees everywhere: the match class absorbs the agree level at
// the ceiling, and the non-match class is pushed there too since nothing
// distinguishes them.
TEST(Em, AllAgreeDegenerateLimit) {
  const std::vector<ComparisonVector> gammas(200, ComparisonVector{{1, 1, 1}, {false, false, false}});
  EmOptions opts;
  const auto trace = fit_em_traced(gammas, LinkageModel::initial(std::vector<std::size_t>{2, 2, 2}), opts);
  for (std::size_t f = 0; f < 3; ++f) EXPECT_NEAR(trace.model.m[f][1], 1.0 - opts.floor, 1e-9);
  EXPECT_GT(trace.model.p, 0.9);
  EXPECT_NO_THROW(trace.model.validate(opts.floor));
}

TEST(Em, DeterministicGivenInputs) {
  const auto data = plant(three_binary_truth(), 300, 4);
  const auto init = LinkageModel::initial(std::vector<std::size_t>{2, 2, 2});
  const auto a = fit_em(data.gammas, init);
  const auto b = fit_em(data.gammas, init);
  EXPECT_EQ(a.m, b.m);
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.p, b.p);
}

TEST(ProjectWithFloor, MatchesClosedFormWhenUnconstrained) {
  const auto x = project_with_floor({2.0, 6.0, 2.0}, 1e-4);
  EXPECT_NEAR(x[0], 0.2, 1e-15);
  EXPECT_NEAR(x[1], 0.6, 1e-15);
}

TEST(ProjectWithFloor, PinsViolatorsAndKeepsUnitSum) {
  const auto x = project_with_floor({0.0, 0.0, 10.0}, 0.01);
  EXPECT_EQ(x[0], 0.01);
  EXPECT_EQ(x[1], 0.01);
  EXPECT_NEAR(x[2], 0.98, 1e-15);
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> c(1 + rng.below(6));
    for (auto& v : c) v = rng.bernoulli(0.3) ? 0.0 : rng.uniform() * 10.0;
    if (std::accumulate(c.begin(), c.end(), 0.0) == 0.0) c[0] = 1.0;
    if (c.size() < 2) c.push_back(0.0);
    const auto p = project_with_floor(c, 1e-3);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    for (double v : p) EXPECT_GE(v, 1e-3 - 1e-15);
  }
}

}  // namespace
}  // namespace linkguard::linkage

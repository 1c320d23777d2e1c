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

// Threshold selection from tolerable error rates. Every comparison
// configuration is enumerated and ranked by weight. The link region is the
// largest top segment whose total P(gamma | U) stays within mu; the non-link
// region is the largest bottom segment whose total P(gamma | M) stays within
// lambda. Error rates are configuration masses, i.e. P(link | U) <= mu and
// P(non-link | M) <= lambda.
//
// Configurations of equal weight are indivisible. Cut-offs sit midway
// between the last weight inside a region and the first weight outside it,
// so no configuration ever scores exactly on a threshold.

#ifndef LINKGUARD_LINKAGE_THRESHOLDS_HPP_
#define LINKGUARD_LINKAGE_THRESHOLDS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "linkguard/errors.hpp"
#include "linkguard/linkage/model.hpp"

namespace linkguard::linkage {

inline constexpr std::uint64_t kDefaultConfigurationCap = 1'000'000;

struct Configuration {
  std::vector<int> levels;
  double weight = 0.0;
  double m_mass = 0.0;  // P(gamma | M)
  double u_mass = 0.0;  // P(gamma | U)
};

inline std::vector<Configuration> enumerate_configurations(const LinkageModel& model,
                                                           std::uint64_t cap = kDefaultConfigurationCap) {
  std::uint64_t total = 1;
  for (std::size_t f = 0; f < model.feature_count(); ++f) {
    total *= model.arity(f);
    if (total > cap)
      throw CapacityError("threshold selection: configuration space exceeds cap of " + std::to_string(cap) +
                          "; coarsen the feature bins");
  }
  std::vector<Configuration> out;
  out.reserve(total);
  std::vector<int> levels(model.feature_count(), 0);
  for (std::uint64_t i = 0; i < total; ++i) {
    Configuration c;
    c.levels = levels;
    c.m_mass = 1.0;
    c.u_mass = 1.0;
    for (std::size_t f = 0; f < levels.size(); ++f) {
      c.weight += feature_weight(model, f, levels[f]);
      c.m_mass *= model.m[f][levels[f]];
      c.u_mass *= model.u[f][levels[f]];
    }
    out.push_back(std::move(c));
    for (std::size_t f = levels.size(); f-- > 0;) {
      if (++levels[f] < static_cast<int>(model.arity(f))) break;
      levels[f] = 0;
    }
  }
  return out;
}

namespace detail {

inline bool same_weight(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Walks configurations in `order`, absorbing whole equal-weight groups while
// the accumulated mass stays within `budget`. Returns the number absorbed.
template <class Mass>
std::size_t absorb(const std::vector<Configuration>& configs, const std::vector<std::size_t>& order,
                   double budget, Mass mass) {
  const double slack = 1e-12;
  double acc = 0.0;
  std::size_t taken = 0;
  while (taken < order.size()) {
    std::size_t end = taken;
    double group = 0.0;
    while (end < order.size() && same_weight(configs[order[end]].weight, configs[order[taken]].weight)) {
      group += mass(configs[order[end]]);
      ++end;
    }
    if (acc + group > budget + slack) break;
    acc += group;
    taken = end;
  }
  return taken;
}

}  // namespace detail

inline Thresholds choose_thresholds(const LinkageModel& model, double mu, double lambda,
                                    std::uint64_t cap = kDefaultConfigurationCap) {
  if (!(mu >= 0.0 && mu < 1.0) || !(lambda >= 0.0 && lambda < 1.0))
    throw ArgumentError("choose_thresholds: mu and lambda must lie in [0, 1)");
  const auto configs = enumerate_configurations(model, cap);
  std::vector<std::size_t> order(configs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return configs[a].weight > configs[b].weight; });

  constexpr double kInf = std::numeric_limits<double>::infinity();
  Thresholds th;

  const std::size_t top = detail::absorb(configs, order, mu, [](const Configuration& c) { return c.u_mass; });
  if (top == 0) {
    th.t_mu = kInf;
  } else if (top == order.size()) {
    th.t_mu = -kInf;
  } else {
    th.t_mu = 0.5 * (configs[order[top - 1]].weight + configs[order[top]].weight);
  }

  std::vector<std::size_t> ascending(order.rbegin(), order.rend());
  const std::size_t bottom =
      detail::absorb(configs, ascending, lambda, [](const Configuration& c) { return c.m_mass; });
  if (bottom == 0) {
    th.t_lambda = -kInf;
  } else if (bottom == ascending.size()) {
    th.t_lambda = kInf;
  } else {
    th.t_lambda = 0.5 * (configs[ascending[bottom - 1]].weight + configs[ascending[bottom]].weight);
  }

  if (th.t_lambda > th.t_mu) th.t_lambda = th.t_mu;  // regions overlap: no Possible band
  return th;
}

// Model-implied error masses of a threshold pair.
struct RegionMasses {
  double false_match = 0.0;      // sum P(gamma | U) over Link configurations
  double false_non_match = 0.0;  // sum P(gamma | M) over NonLink configurations
};

inline RegionMasses region_masses(const LinkageModel& model, const Thresholds& th,
                                  std::uint64_t cap = kDefaultConfigurationCap) {
  RegionMasses out;
  for (const auto& c : enumerate_configurations(model, cap)) {
    const Decision d = classify(c.weight, th);
    if (d == Decision::kLink) out.false_match += c.u_mass;
    if (d == Decision::kNonLink) out.false_non_match += c.m_mass;
  }
  return out;
}

}  // namespace linkguard::linkage

#endif  // LINKGUARD_LINKAGE_THRESHOLDS_HPP_

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

#ifndef LINKGUARD_DISCLOSURE_METHODS_HPP_
#define LINKGUARD_DISCLOSURE_METHODS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "linkguard/disclosure/microtable.hpp"
#include "linkguard/errors.hpp"
#include "linkguard/rng.hpp"
#include "linkguard/text.hpp"

namespace linkguard::disclosure {

enum class Stat { kMean, kSum };

inline std::string_view to_string(Stat s) { return s == Stat::kMean ? "mean" : "sum"; }

inline Stat parse_stat(std::string_view s) {
  if (s == "mean") return Stat::kMean;
  if (s == "sum") return Stat::kSum;
  throw ArgumentError("unknown statistic '" + std::string(s) + "'");
}

// Columns divided by their sample sd; zero-sd columns are left unscaled.
inline std::vector<std::vector<double>> standardized(const Microtable& t, const ColumnStats& s) {
  std::vector<std::vector<double>> z(t.size(), std::vector<double>(t.width()));
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t c = 0; c < t.width(); ++c) {
      const double scale = s.sd[c] > 0.0 ? s.sd[c] : 1.0;
      z[i][c] = (t.rows[i][c] - s.mean[c]) / scale;
    }
  return z;
}

inline double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) d += (a[c] - b[c]) * (a[c] - b[c]);
  return d;
}

struct Microaggregation {
  Microtable released;
  std::vector<std::size_t> group_of;  // row -> group index
  std::size_t group_count = 0;
};

// MDAV-style fixed-size grouping on standardized columns. While at least 2k
// rows remain, the row farthest from the centroid of the remainder seeds a
// group with its k - 1 nearest remaining rows; the final remainder (k to
// 2k - 1 rows) forms the last group. Ties go to the lowest row index.
inline Microaggregation microaggregate(const Microtable& t, std::size_t k, Stat stat = Stat::kMean) {
  if (k < 2) throw ArgumentError("microaggregate: k must be at least 2");
  if (t.size() < k) throw ArgumentError("microaggregate: fewer rows than k");
  const auto z = standardized(t, column_stats(t));
  const std::size_t n = t.size();
  const std::size_t d = t.width();

  Microaggregation out;
  out.group_of.assign(n, 0);
  std::vector<std::size_t> remaining(n);
  for (std::size_t i = 0; i < n; ++i) remaining[i] = i;
  std::vector<std::vector<std::size_t>> groups;

  while (remaining.size() >= 2 * k) {
    std::vector<double> centroid(d, 0.0);
    for (std::size_t i : remaining)
      for (std::size_t c = 0; c < d; ++c) centroid[c] += z[i][c];
    for (auto& v : centroid) v /= static_cast<double>(remaining.size());

    std::size_t far = remaining.front();
    double far_d = -1.0;
    for (std::size_t i : remaining) {
      const double dist = squared_distance(z[i], centroid);
      if (dist > far_d) {
        far_d = dist;
        far = i;
      }
    }
    std::vector<std::pair<double, std::size_t>> by_distance;
    by_distance.reserve(remaining.size());
    for (std::size_t i : remaining) by_distance.emplace_back(i == far ? -1.0 : squared_distance(z[i], z[far]), i);
    std::partial_sort(by_distance.begin(), by_distance.begin() + static_cast<std::ptrdiff_t>(k), by_distance.end());
    std::vector<std::size_t> group;
    std::vector<bool> taken(n, false);
    for (std::size_t j = 0; j < k; ++j) {
      group.push_back(by_distance[j].second);
      taken[by_distance[j].second] = true;
    }
    std::sort(group.begin(), group.end());
    groups.push_back(std::move(group));
    std::vector<std::size_t> rest;
    rest.reserve(remaining.size() - k);
    for (std::size_t i : remaining)
      if (!taken[i]) rest.push_back(i);
    remaining = std::move(rest);
  }
  groups.push_back(remaining);

  out.released = t;
  out.group_count = groups.size();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::vector<double> value(d, 0.0);
    for (std::size_t i : groups[g])
      for (std::size_t c = 0; c < d; ++c) value[c] += t.rows[i][c];
    if (stat == Stat::kMean)
      for (auto& v : value) v /= static_cast<double>(groups[g].size());
    for (std::size_t i : groups[g]) {
      out.group_of[i] = g;
      out.released.rows[i] = value;
    }
  }
  return out;
}

// Adds N(0, (lambda * sample sd)^2) per cell; row-major draw order.
inline Microtable perturb(const Microtable& t, double lambda, std::uint64_t seed) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ArgumentError("perturb: lambda must be finite and >= 0");
  Microtable out = t;
  if (lambda == 0.0) return out;
  const ColumnStats s = column_stats(t);
  Rng rng(seed);
  for (auto& row : out.rows)
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += lambda * s.sd[c] * rng.normal();
  return out;
}

// One release method with its parameters. Noise with lambda 0 is the
// identity release.
struct ReleasePlan {
  enum class Method { kMicroaggregate, kNoise };

  Method method = Method::kNoise;
  std::size_t k = 2;
  Stat stat = Stat::kMean;
  double lambda = 0.0;
  std::uint64_t seed = 0;

  static ReleasePlan microaggregation(std::size_t k, Stat stat = Stat::kMean) {
    ReleasePlan p;
    p.method = Method::kMicroaggregate;
    p.k = k;
    p.stat = stat;
    return p;
  }

  static ReleasePlan noise(double lambda, std::uint64_t seed) {
    ReleasePlan p;
    p.method = Method::kNoise;
    p.lambda = lambda;
    p.seed = seed;
    return p;
  }

  static ReleasePlan identity() { return noise(0.0, 0); }

  bool is_identity() const { return method == Method::kNoise && lambda == 0.0; }

  void validate() const {
    if (method == Method::kMicroaggregate && k < 2) throw ArgumentError("release plan: k must be at least 2");
    if (method == Method::kNoise && (!(lambda >= 0.0) || !std::isfinite(lambda)))
      throw ArgumentError("release plan: lambda must be finite and >= 0");
  }

  bool feasible(const Microtable& t) const { return method == Method::kNoise || t.size() >= k; }

  Microtable apply(const Microtable& t) const {
    validate();
    if (method == Method::kMicroaggregate) return microaggregate(t, k, stat).released;
    return perturb(t, lambda, seed);
  }

  std::string describe() const {
    if (method == Method::kMicroaggregate)
      return "microaggregate(k=" + std::to_string(k) + ",stat=" + std::string(to_string(stat)) + ")";
    return "noise(lambda=" + format_double(lambda) + ",seed=" + std::to_string(seed) + ")";
  }
};

}  // namespace linkguard::disclosure

#endif  // LINKGUARD_DISCLOSURE_METHODS_HPP_

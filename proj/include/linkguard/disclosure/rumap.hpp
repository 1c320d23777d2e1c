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

#ifndef LINKGUARD_DISCLOSURE_RUMAP_HPP_
#define LINKGUARD_DISCLOSURE_RUMAP_HPP_

#include <cmath>
#include <string>
#include <vector>

#include "linkguard/disclosure/methods.hpp"
#include "linkguard/disclosure/metrics.hpp"

namespace linkguard::disclosure {

struct RUPoint {
  double param = 0.0;
  double risk = 0.0;
  double utility = 0.0;

  friend bool operator==(const RUPoint&, const RUPoint&) = default;
};

// A method with everything but the swept parameter fixed: k for
// microaggregation, lambda for noise.
struct PlanFamily {
  ReleasePlan::Method method = ReleasePlan::Method::kNoise;
  Stat stat = Stat::kMean;
  std::uint64_t seed = 0;

  ReleasePlan at(double param) const {
    if (method == ReleasePlan::Method::kMicroaggregate) {
      if (!(param >= 2.0) || param != std::floor(param)) throw ArgumentError("ru_sweep: k must be an integer >= 2");
      return ReleasePlan::microaggregation(static_cast<std::size_t>(param), stat);
    }
    return ReleasePlan::noise(param, seed);
  }
};

// One point per grid value, in grid order.
inline std::vector<RUPoint> ru_sweep(const Microtable& t, const PlanFamily& family, const std::vector<double>& grid) {
  if (grid.empty()) throw ArgumentError("ru_sweep: empty grid");
  std::vector<RUPoint> out;
  out.reserve(grid.size());
  for (double param : grid) {
    const Microtable released = family.at(param).apply(t);
    out.push_back({param, reident_risk(t, released), utility(t, released)});
  }
  return out;
}

inline std::string format_ru(const std::vector<RUPoint>& points) {
  std::string out = "param,risk,utility\n";
  for (const auto& p : points)
    out += format_double(p.param) + "," + format_double(p.risk) + "," + format_double(p.utility) + "\n";
  return out;
}

}  // namespace linkguard::disclosure

#endif  // LINKGUARD_DISCLOSURE_RUMAP_HPP_

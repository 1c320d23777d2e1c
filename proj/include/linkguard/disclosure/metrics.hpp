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

#ifndef LINKGUARD_DISCLOSURE_METRICS_HPP_
#define LINKGUARD_DISCLOSURE_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "linkguard/disclosure/methods.hpp"
#include "linkguard/disclosure/microtable.hpp"
#include "linkguard/errors.hpp"

namespace linkguard::disclosure {

namespace detail {

inline void check_same_columns(const Microtable& a, const Microtable& b, std::string_view who) {
  if (a.columns != b.columns) throw ArgumentError(std::string(who) + ": column mismatch");
}

}  // namespace detail

// Nearest-neighbour linkage attack from released rows back to the original
// rows, Euclidean on columns standardized by the original statistics. A
// released row counts as re-identified only when its nearest original row is
// unique and is its true source. Ids are used for scoring only.
inline double reident_risk(const Microtable& original, const Microtable& released) {
  detail::check_same_columns(original, released, "reident_risk");
  if (released.size() == 0) return 0.0;
  std::map<std::string, std::size_t> source;
  for (std::size_t i = 0; i < original.size(); ++i) source.emplace(original.ids[i], i);
  const ColumnStats s = column_stats(original);
  const auto z_orig = standardized(original, s);
  std::vector<double> z(released.width());
  std::size_t hits = 0;
  for (std::size_t r = 0; r < released.size(); ++r) {
    auto it = source.find(released.ids[r]);
    if (it == source.end()) throw ArgumentError("reident_risk: released id '" + released.ids[r] + "' has no source");
    for (std::size_t c = 0; c < z.size(); ++c)
      z[c] = (released.rows[r][c] - s.mean[c]) / (s.sd[c] > 0.0 ? s.sd[c] : 1.0);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_at = 0;
    std::size_t best_count = 0;
    for (std::size_t j = 0; j < original.size(); ++j) {
      const double d = squared_distance(z, z_orig[j]);
      if (d < best) {
        best = d;
        best_at = j;
        best_count = 1;
      } else if (d == best) {
        ++best_count;
      }
    }
    hits += best_count == 1 && best_at == it->second;
  }
  return static_cast<double>(hits) / static_cast<double>(released.size());
}

// 1 - mean over columns of the column loss. Column loss is the average of
// min(1, |mean shift| / sd) and min(1, |sd ratio - 1|); a zero-sd column
// contributes min(1, |mean shift|) alone.
inline double utility(const Microtable& original, const Microtable& released) {
  detail::check_same_columns(original, released, "utility");
  if (original.size() != released.size()) throw ArgumentError("utility: row count mismatch");
  if (original.width() == 0 || original.size() == 0) return 1.0;
  const ColumnStats a = column_stats(original);
  const ColumnStats b = column_stats(released);
  double loss = 0.0;
  for (std::size_t c = 0; c < original.width(); ++c) {
    const double shift = std::abs(b.mean[c] - a.mean[c]);
    if (a.sd[c] > 0.0) {
      loss += 0.5 * (std::min(1.0, shift / a.sd[c]) + std::min(1.0, std::abs(b.sd[c] / a.sd[c] - 1.0)));
    } else {
      loss += std::min(1.0, shift);
    }
  }
  return std::clamp(1.0 - loss / static_cast<double>(original.width()), 0.0, 1.0);
}

}  // namespace linkguard::disclosure

#endif  // LINKGUARD_DISCLOSURE_METRICS_HPP_

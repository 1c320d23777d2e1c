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

#ifndef LINKGUARD_LINKAGE_COMPARE_HPP_
#define LINKGUARD_LINKAGE_COMPARE_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linkguard/errors.hpp"
#include "linkguard/linkage/schema.hpp"

namespace linkguard::linkage {

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// 1 - distance / max length, in [0, 1]. Two empty strings are identical.
inline double edit_similarity(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  const std::size_t d = levenshtein(a, b);
  return static_cast<double>(longest - d) / static_cast<double>(longest);
}

enum class Comparator { kEquality, kPrefix, kEditSimilarity };

// How one field pair becomes a discrete outcome level. Level 0 is the
// weakest agreement; the highest level (arity - 1) is full agreement.
struct FeatureSpec {
  std::string name;
  std::string source_field;
  Comparator kind = Comparator::kEquality;
  std::size_t prefix_chars = 0;  // kPrefix only
  std::vector<double> bins;      // kEditSimilarity only: cut-points in (0, 1)

  static FeatureSpec equality(std::string name, std::string field) {
    return {std::move(name), std::move(field), Comparator::kEquality, 0, {}};
  }
  static FeatureSpec prefix(std::string name, std::string field, std::size_t chars) {
    return {std::move(name), std::move(field), Comparator::kPrefix, chars, {}};
  }
  static FeatureSpec edit_similarity(std::string name, std::string field, std::vector<double> cuts) {
    return {std::move(name), std::move(field), Comparator::kEditSimilarity, 0, std::move(cuts)};
  }

  std::size_t arity() const { return kind == Comparator::kEditSimilarity ? bins.size() + 1 : 2; }

  void validate() const {
    if (name.empty()) throw ArgumentError("feature: empty name");
    if (kind == Comparator::kPrefix && prefix_chars == 0)
      throw ArgumentError("feature '" + name + "': prefix length must be positive");
    if (kind == Comparator::kEditSimilarity) {
      if (bins.empty()) throw ArgumentError("feature '" + name + "': needs at least one bin cut-point");
      for (std::size_t i = 0; i < bins.size(); ++i) {
        if (!(bins[i] > 0.0 && bins[i] < 1.0))
          throw ArgumentError("feature '" + name + "': bin cut-points must lie in (0, 1)");
        if (i > 0 && !(bins[i] > bins[i - 1]))
          throw ArgumentError("feature '" + name + "': bin cut-points must be strictly increasing");
      }
    }
  }

  // Outcome level for two present values.
  int level(std::string_view a, std::string_view b) const {
    switch (kind) {
      case Comparator::kEquality:
        return a == b ? 1 : 0;
      case Comparator::kPrefix:
        return a.substr(0, prefix_chars) == b.substr(0, prefix_chars) ? 1 : 0;
      case Comparator::kEditSimilarity: {
        const double sim = linkage::edit_similarity(a, b);
        return static_cast<int>(std::upper_bound(bins.begin(), bins.end(), sim) - bins.begin());
      }
    }
    return 0;
  }
};

struct ComparisonVector {
  std::vector<int> levels;
  std::vector<bool> missing;

  std::size_t size() const { return levels.size(); }
  friend bool operator==(const ComparisonVector&, const ComparisonVector&) = default;
  friend auto operator<=>(const ComparisonVector&, const ComparisonVector&) = default;
};

inline void validate_features(const std::vector<FeatureSpec>& specs, const Schema& schema) {
  if (specs.empty()) throw ArgumentError("at least one feature is required");
  for (const auto& spec : specs) {
    spec.validate();
    if (!schema.has_field(spec.source_field))
      throw SchemaError("feature '" + spec.name + "': unknown source field '" + spec.source_field + "'");
  }
}

// Outcome for one feature given the two (possibly missing) field values.
inline void compare_into(const FeatureSpec& spec, const std::optional<std::string>& a,
                         const std::optional<std::string>& b, int& level, bool& missing) {
  if (!a || !b) {
    level = 0;
    missing = true;
  } else {
    level = spec.level(*a, *b);
    missing = false;
  }
}

inline ComparisonVector compare_fields(const Record& a, const Record& b,
                                       const std::vector<FeatureSpec>& specs, const Schema& schema) {
  validate_features(specs, schema);
  ComparisonVector gamma;
  gamma.levels.resize(specs.size());
  gamma.missing.resize(specs.size());
  for (std::size_t f = 0; f < specs.size(); ++f) {
    int level = 0;
    bool missing = false;
    compare_into(specs[f], a.value(specs[f].source_field), b.value(specs[f].source_field), level, missing);
    gamma.levels[f] = level;
    gamma.missing[f] = missing;
  }
  return gamma;
}

}  // namespace linkguard::linkage

#endif  // LINKGUARD_LINKAGE_COMPARE_HPP_

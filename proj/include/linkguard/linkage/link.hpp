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

#ifndef LINKGUARD_LINKAGE_LINK_HPP_
#define LINKGUARD_LINKAGE_LINK_HPP_

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "linkguard/linkage/blocking.hpp"
#include "linkguard/linkage/compare.hpp"
#include "linkguard/linkage/em.hpp"
#include "linkguard/linkage/model.hpp"
#include "linkguard/linkage/schema.hpp"
#include "linkguard/linkage/thresholds.hpp"

namespace linkguard::linkage {

struct LinkConfig {
  std::vector<FeatureSpec> features;
  std::optional<LinkageModel> model;  // fitted by EM from the candidates when absent
  std::optional<LinkageModel> em_init;
  EmOptions em;
  double mu = 1e-5;  // expected false links = mu * non-match candidates
  double lambda = 0.01;
  std::optional<std::string> block_field;
  std::uint64_t configuration_cap = kDefaultConfigurationCap;
};

struct ScoredPair {
  std::string id_a;
  std::string id_b;
  double score = 0.0;

  friend bool operator==(const ScoredPair&, const ScoredPair&) = default;
};

struct LinkageResult {
  std::vector<ScoredPair> links;
  std::vector<ScoredPair> possibles;
  std::vector<ScoredPair> nonlinks;
  std::uint64_t candidate_count = 0;
  std::uint64_t blocked_out_count = 0;
  LinkageModel model;
  Thresholds thresholds;
  bool fitted = false;
  int em_iterations = 0;
};

namespace detail {

// Field values per record, in feature order.
inline std::vector<std::vector<std::optional<std::string>>> project(const std::vector<Record>& records,
                                                                    const std::vector<FeatureSpec>& specs) {
  std::vector<std::vector<std::optional<std::string>>> out(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    out[i].reserve(specs.size());
    for (const auto& s : specs) out[i].push_back(records[i].value(s.source_field));
  }
  return out;
}

}  // namespace detail

inline LinkageResult link(const Schema& schema, const std::vector<Record>& file_a,
                          const std::vector<Record>& file_b, const LinkConfig& config) {
  validate_features(config.features, schema);
  if (config.block_field && !schema.has_field(*config.block_field))
    throw SchemaError("blocking field '" + *config.block_field + "' is not in the schema");
  for (const auto& r : file_a) validate_record(r, schema);
  for (const auto& r : file_b) validate_record(r, schema);

  const auto pairs = candidate_pairs(file_a, file_b, config.block_field ? &*config.block_field : nullptr);
  const auto va = detail::project(file_a, config.features);
  const auto vb = detail::project(file_b, config.features);

  std::vector<ComparisonVector> gammas(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto& g = gammas[k];
    g.levels.resize(config.features.size());
    g.missing.resize(config.features.size());
    const auto& ra = va[pairs[k].first];
    const auto& rb = vb[pairs[k].second];
    for (std::size_t f = 0; f < config.features.size(); ++f) {
      int level = 0;
      bool missing = false;
      compare_into(config.features[f], ra[f], rb[f], level, missing);
      g.levels[f] = level;
      g.missing[f] = missing;
    }
  }

  LinkageResult result;
  result.candidate_count = pairs.size();
  result.blocked_out_count = static_cast<std::uint64_t>(file_a.size()) * file_b.size() - pairs.size();
  if (config.model) {
    config.model->validate(config.em.floor);
    result.model = *config.model;
  } else {
    const LinkageModel init = config.em_init ? *config.em_init : LinkageModel::initial(config.features);
    if (gammas.empty()) {
      init.validate(config.em.floor);
      result.model = init;
    } else {
      EmTrace trace = fit_em_traced(gammas, init, config.em);
      result.model = std::move(trace.model);
      result.em_iterations = trace.iterations;
      result.fitted = true;
    }
  }
  result.thresholds = choose_thresholds(result.model, config.mu, config.lambda, config.configuration_cap);

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double score = agreement_weight(gammas[k], result.model);
    ScoredPair sp{file_a[pairs[k].first].id, file_b[pairs[k].second].id, score};
    switch (classify(score, result.thresholds)) {
      case Decision::kLink:
        result.links.push_back(std::move(sp));
        break;
      case Decision::kPossible:
        result.possibles.push_back(std::move(sp));
        break;
      case Decision::kNonLink:
        result.nonlinks.push_back(std::move(sp));
        break;
    }
  }
  return result;
}

struct LinkQuality {
  std::size_t true_positives = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
};

// Scores the Link decisions against known true pairs. Precision of an empty
// link set is 1; recall against an empty truth is 1.
inline LinkQuality evaluate_links(const LinkageResult& result,
                                  const std::set<std::pair<std::string, std::string>>& truth) {
  LinkQuality q;
  for (const auto& l : result.links)
    if (truth.contains({l.id_a, l.id_b})) ++q.true_positives;
  const double tp = static_cast<double>(q.true_positives);
  if (!result.links.empty()) q.precision = tp / static_cast<double>(result.links.size());
  if (!truth.empty()) q.recall = tp / static_cast<double>(truth.size());
  q.f1 = (q.precision + q.recall) > 0.0 ? 2.0 * q.precision * q.recall / (q.precision + q.recall) : 0.0;
  return q;
}

}  // namespace linkguard::linkage

#endif  // LINKGUARD_LINKAGE_LINK_HPP_

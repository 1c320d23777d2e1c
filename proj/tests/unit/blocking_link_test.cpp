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

#include <set>

#include "linkguard/corpus/corpus.hpp"
#include "linkguard/linkage/blocking.hpp"
#include "linkguard/linkage/link.hpp"

namespace linkguard::linkage {
namespace {

Schema postcode_schema() { return Schema({{"id", FieldKind::kText}, {"pc", FieldKind::kCategorical}}, "id"); }

std::vector<Record> with_postcodes(std::vector<std::optional<std::string>> codes) {
  std::vector<Record> out;
  for (std::size_t i = 0; i < codes.size(); ++i) out.push_back(Record{"r" + std::to_string(i), {{"pc", codes[i]}}});
  return out;
}

TEST(MakeBlocks, TwoBlocksOfTwo) {
  const auto blocks = make_blocks(with_postcodes({"A", "A", "B", "B"}), "pc", postcode_schema());
  EXPECT_EQ(blocks.blocks.size(), 2u);
  EXPECT_EQ(blocks.blocks.at("A").size(), 2u);
  EXPECT_TRUE(blocks.overflow.empty());
  EXPECT_EQ(within_file_pair_count(blocks), 2u);
}

TEST(MakeBlocks, SingleValueMeansNoReduction) {
  const auto blocks = make_blocks(with_postcodes({"A", "A", "A", "A"}), "pc", postcode_schema());
  EXPECT_EQ(blocks.blocks.size(), 1u);
  EXPECT_EQ(within_file_pair_count(blocks), 6u);
}

TEST(MakeBlocks, MissingKeyGoesToOverflowComparedToAll) {
  const auto blocks = make_blocks(with_postcodes({"A", "A", "B", "B", std::nullopt}), "pc", postcode_schema());
  EXPECT_EQ(blocks.overflow.size(), 1u);
  EXPECT_EQ(within_file_pair_count(blocks), 2u + 4u);
  EXPECT_THROW(make_blocks(with_postcodes({"A"}), "nope", postcode_schema()), SchemaError);
}

TEST(CandidatePairs, OverflowOnEitherSideMeetsEverything) {
  const auto a = with_postcodes({"A", "B", std::nullopt});
  const auto b = with_postcodes({"A", "C", std::nullopt});
  const std::string field = "pc";
  const auto pairs = candidate_pairs(a, b, &field);
  const std::vector<std::pair<std::size_t, std::size_t>> expected = {{0, 0}, {0, 2}, {1, 2}, {2, 0}, {2, 1}, {2, 2}};
  EXPECT_EQ(pairs, expected);
  EXPECT_EQ(candidate_pairs(a, b, nullptr).size(), 9u);
}

std::vector<FeatureSpec> synthetic_features() {
  return {FeatureSpec::edit_similarity("first", "first_name", {0.7, 0.9}),
          FeatureSpec::edit_similarity("last", "last_name", {0.7, 0.9}),
          FeatureSpec::equality("year", "birth_year"), FeatureSpec::equality("sex", "sex"),
          FeatureSpec::equality("zip", "zip")};
}

TEST(Link, CleanCopyIsPerfect) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto files = corpus::generate_pairs(300, 1.0, corpus::ErrorProfile{}, seed);
    LinkConfig cfg;
    cfg.features = synthetic_features();
    cfg.block_field = "zip";
    const auto result = link(files.schema, files.file_a, files.file_b, cfg);
    const auto q = evaluate_links(result, files.truth.as_set());
    EXPECT_EQ(q.precision, 1.0) << seed;
    EXPECT_EQ(q.recall, 1.0) << seed;
    // Every true pair carries the top weight.
    for (const auto& l : result.links) EXPECT_EQ(l.score, result.links.front().score);
  }
}

TEST(Link, QualityDegradesWithFieldError) {
  double prev_f1 = 2.0, prev_recall = 2.0, prev_precision = 2.0;
  for (double rate : {0.0, 0.05, 0.2, 0.4}) {
    corpus::ErrorProfile profile;
    profile.field_error_rate = rate;
    const auto files = corpus::generate_pairs(400, 1.0, profile, 5);
    LinkConfig cfg;
    cfg.features = synthetic_features();
    cfg.block_field = "zip";
    const auto q = evaluate_links(link(files.schema, files.file_a, files.file_b, cfg), files.truth.as_set());
    EXPECT_LT(q.f1, prev_f1) << rate;
    EXPECT_LT(q.recall, prev_recall) << rate;
    EXPECT_LE(q.precision, prev_precision) << rate;
    prev_f1 = q.f1;
    prev_recall = q.recall;
    prev_precision = q.precision;
  }
}

// The effect is small: single seeds are noisy and neighbouring overlaps can
// tie, so the ordering is asserted on a coarse grid for the 16-seed mean.
TEST(Link, QualityDegradesAsOverlapShrinks) {
  corpus::ErrorProfile profile;
  profile.field_error_rate = 0.1;
  double prev = 2.0;
  for (double overlap : {1.0, 0.2, 0.05}) {
    double f1 = 0.0;
    for (std::uint64_t seed = 1; seed <= 16; ++seed) {
      const auto files = corpus::generate_pairs(500, overlap, profile, seed);
      LinkConfig cfg;
      cfg.features = synthetic_features();
      cfg.block_field = "zip";
      f1 += evaluate_links(link(files.schema, files.file_a, files.file_b, cfg), files.truth.as_set()).f1 / 16.0;
    }
    EXPECT_LT(f1, prev) << overlap;
    prev = f1;
  }
}

TEST(Link, EmptyFileBGivesEmptyResult) {
  const auto files = corpus::generate_pairs(20, 1.0, corpus::ErrorProfile{}, 3);
  LinkConfig cfg;
  cfg.features = synthetic_features();
  const auto result = link(files.schema, files.file_a, {}, cfg);
  EXPECT_EQ(result.candidate_count, 0u);
  EXPECT_TRUE(result.links.empty() && result.possibles.empty() && result.nonlinks.empty());
  EXPECT_FALSE(result.fitted);
}

TEST(Link, PartitionAndBlockingConservatism) {
  corpus::ErrorProfile profile;
  profile.field_error_rate = 0.1;
  profile.missing_rate = 0.05;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto files = corpus::generate_pairs(150, 0.7, profile, seed);
    LinkConfig cfg;
    cfg.features = synthetic_features();
    const auto full = link(files.schema, files.file_a, files.file_b, cfg);
    cfg.block_field = "zip";
    const auto blocked = link(files.schema, files.file_a, files.file_b, cfg);
    for (const auto* r : {&full, &blocked})
      EXPECT_EQ(r->links.size() + r->possibles.size() + r->nonlinks.size(), r->candidate_count);
    EXPECT_LE(blocked.candidate_count, full.candidate_count);
    EXPECT_EQ(blocked.candidate_count + blocked.blocked_out_count, full.candidate_count);

    const std::string field = "zip";
    std::set<std::pair<std::string, std::string>> candidates;
    for (const auto& [i, j] : candidate_pairs(files.file_a, files.file_b, &field))
      candidates.emplace(files.file_a[i].id, files.file_b[j].id);
    for (const auto& l : blocked.links) EXPECT_TRUE(candidates.contains({l.id_a, l.id_b}));

    // Same model on both runs isolates the effect of blocking on recall.
    cfg.model = full.model;
    const auto blocked_fixed = link(files.schema, files.file_a, files.file_b, cfg);
    EXPECT_LE(evaluate_links(blocked_fixed, files.truth.as_set()).recall,
              evaluate_links(full, files.truth.as_set()).recall);
  }
}

TEST(Link, SuppliedModelSkipsFitting) {
  const auto files = corpus::generate_pairs(40, 1.0, corpus::ErrorProfile{}, 9);
  LinkConfig cfg;
  cfg.features = {FeatureSpec::equality("last", "last_name")};
  cfg.model = LinkageModel::initial(std::vector<std::size_t>{2});
  const auto result = link(files.schema, files.file_a, files.file_b, cfg);
  EXPECT_FALSE(result.fitted);
  EXPECT_EQ(result.model.m, cfg.model->m);
}

TEST(Link, UnknownBlockFieldIsSchemaError) {
  const auto files = corpus::generate_pairs(5, 1.0, corpus::ErrorProfile{}, 1);
  LinkConfig cfg;
  cfg.features = synthetic_features();
  cfg.block_field = "postcode";
  EXPECT_THROW(link(files.schema, files.file_a, files.file_b, cfg), SchemaError);
}

TEST(EvaluateLinks, EmptyConventions) {
  LinkageResult r;
  EXPECT_EQ(evaluate_links(r, {}).f1, 1.0);
  EXPECT_EQ(evaluate_links(r, {{"a", "b"}}).recall, 0.0);
}

}  // namespace
}  // namespace linkguard::linkage

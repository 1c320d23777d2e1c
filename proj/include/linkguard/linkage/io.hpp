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

// Linkage job files and reports.
//
//   schema   = id:text,first_name:text,zip:categorical
//   id_field = id
//   block    = zip                       (optional)
//   mu       = 0.00001
//   lambda   = 0.01
//   em.max_iter / em.tol / em.floor      (optional)
//   feature.<name> = equality:<field>
//                  | prefix:<field>:<chars>
//                  | edit:<field>:<cut>;<cut>...
//   model.p, model.<feature>.m, model.<feature>.u   (optional, ';'-separated)
//
// Features keep their file order. A model, when given, must name every
// feature and skips EM.

#ifndef LINKGUARD_LINKAGE_IO_HPP_
#define LINKGUARD_LINKAGE_IO_HPP_

#include <optional>
#include <string>
#include <vector>

#include "linkguard/errors.hpp"
#include "linkguard/kvconfig.hpp"
#include "linkguard/linkage/link.hpp"
#include "linkguard/text.hpp"

namespace linkguard::linkage {

struct LinkJob {
  Schema schema;
  LinkConfig config;
};

namespace detail {

inline std::vector<double> parse_semicolon_list(std::string_view s, const std::string& what) {
  std::vector<double> out;
  for (const auto& cell : split(s, ';')) {
    auto v = parse_double(trim(cell));
    if (!v) throw ArgumentError(what + ": '" + cell + "' is not a number");
    out.push_back(*v);
  }
  return out;
}

inline std::string join_semicolon(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? ";" : "") + format_double(values[i]);
  return out;
}

inline FeatureSpec parse_feature(const std::string& name, std::string_view spec) {
  const auto parts = split(spec, ':');
  const std::string kind(trim(parts[0]));
  const std::string where = "feature." + name;
  if (kind == "equality" && parts.size() == 2) return FeatureSpec::equality(name, std::string(trim(parts[1])));
  if (kind == "prefix" && parts.size() == 3) {
    auto n = parse_int(trim(parts[2]));
    if (!n || *n < 1) throw ArgumentError(where + ": prefix length must be a positive integer");
    return FeatureSpec::prefix(name, std::string(trim(parts[1])), static_cast<std::size_t>(*n));
  }
  if (kind == "edit" && parts.size() == 3)
    return FeatureSpec::edit_similarity(name, std::string(trim(parts[1])), parse_semicolon_list(parts[2], where));
  throw ArgumentError(where + ": expected equality:<field>, prefix:<field>:<n> or edit:<field>:<cuts>");
}

inline std::string format_feature(const FeatureSpec& f) {
  switch (f.kind) {
    case Comparator::kEquality:
      return "equality:" + f.source_field;
    case Comparator::kPrefix:
      return "prefix:" + f.source_field + ":" + std::to_string(f.prefix_chars);
    case Comparator::kEditSimilarity:
      return "edit:" + f.source_field + ":" + join_semicolon(f.bins);
  }
  return "";
}

}  // namespace detail

inline LinkJob parse_link_job(const KeyValueConfig& cfg) {
  static const std::set<std::string> kScalar = {"schema", "id_field", "block", "mu", "lambda",
                                                "em.max_iter", "em.tol", "em.floor", "model.p"};
  LinkJob job;
  job.schema = Schema::parse(cfg.get("schema"), cfg.get_or("id_field", "id"));
  auto& c = job.config;
  if (auto b = cfg.find("block")) c.block_field = *b;
  c.mu = cfg.get_double_or("mu", c.mu);
  c.lambda = cfg.get_double_or("lambda", c.lambda);
  c.em.max_iter = static_cast<int>(cfg.get_int_or("em.max_iter", c.em.max_iter));
  c.em.tol = cfg.get_double_or("em.tol", c.em.tol);
  c.em.floor = cfg.get_double_or("em.floor", c.em.floor);

  std::set<std::string> model_keys;
  for (const auto& [key, value] : cfg.entries()) {
    if (key.rfind("feature.", 0) == 0) {
      c.features.push_back(detail::parse_feature(key.substr(8), value));
    } else if (key.rfind("model.", 0) == 0 && key != "model.p") {
      model_keys.insert(key);
    } else if (!kScalar.contains(key)) {
      throw ArgumentError("link config: unknown key '" + key + "'");
    }
  }
  if (c.features.empty()) throw ArgumentError("link config: no features");
  validate_features(c.features, job.schema);
  if (c.block_field && !job.schema.has_field(*c.block_field))
    throw SchemaError("link config: blocking field '" + *c.block_field + "' is not in the schema");

  if (cfg.find("model.p") || !model_keys.empty()) {
    LinkageModel m;
    m.p = cfg.get_double("model.p");
    for (const auto& f : c.features) {
      const std::string base = "model." + f.name + ".";
      m.m.push_back(detail::parse_semicolon_list(cfg.get(base + "m"), base + "m"));
      m.u.push_back(detail::parse_semicolon_list(cfg.get(base + "u"), base + "u"));
      model_keys.erase(base + "m");
      model_keys.erase(base + "u");
      if (m.m.back().size() != f.arity())
        throw ArgumentError(base + "m: expected " + std::to_string(f.arity()) + " levels");
    }
    if (!model_keys.empty()) throw ArgumentError("link config: unknown key '" + *model_keys.begin() + "'");
    m.validate(c.em.floor);
    c.model = std::move(m);
  }
  return job;
}

inline LinkJob load_link_job(const std::string& path) { return parse_link_job(KeyValueConfig::load(path)); }

inline std::string format_link_job(const LinkJob& job) {
  const auto& c = job.config;
  std::string out = "schema = " + job.schema.describe() + "\n";
  out += "id_field = " + job.schema.id_field() + "\n";
  if (c.block_field) out += "block = " + *c.block_field + "\n";
  out += "mu = " + format_double(c.mu) + "\n";
  out += "lambda = " + format_double(c.lambda) + "\n";
  out += "em.max_iter = " + std::to_string(c.em.max_iter) + "\n";
  out += "em.tol = " + format_double(c.em.tol) + "\n";
  out += "em.floor = " + format_double(c.em.floor) + "\n";
  for (const auto& f : c.features) out += "feature." + f.name + " = " + detail::format_feature(f) + "\n";
  if (c.model) {
    out += "model.p = " + format_double(c.model->p) + "\n";
    for (std::size_t i = 0; i < c.features.size(); ++i) {
      out += "model." + c.features[i].name + ".m = " + detail::join_semicolon(c.model->m[i]) + "\n";
      out += "model." + c.features[i].name + ".u = " + detail::join_semicolon(c.model->u[i]) + "\n";
    }
  }
  return out;
}

// Job used for the synthetic corpus when no config is supplied.
inline LinkJob synthetic_link_job() {
  LinkJob job;
  job.schema = Schema::parse("id:text,first_name:text,last_name:text,birth_year:numeric,sex:categorical,zip:categorical",
                             "id");
  job.config.features = {FeatureSpec::edit_similarity("first", "first_name", {0.7, 0.9}),
                         FeatureSpec::edit_similarity("last", "last_name", {0.7, 0.9}),
                         FeatureSpec::equality("year", "birth_year"), FeatureSpec::equality("sex", "sex"),
                         FeatureSpec::equality("zip", "zip")};
  job.config.block_field = "zip";
  return job;
}

// metric,value rows.
inline std::string format_link_report(const LinkageResult& r, const std::optional<LinkQuality>& q) {
  std::string out = "metric,value\n";
  auto row = [&](std::string_view k, const std::string& v) { out += std::string(k) + "," + v + "\n"; };
  row("candidates", std::to_string(r.candidate_count));
  row("blocked_out", std::to_string(r.blocked_out_count));
  row("links", std::to_string(r.links.size()));
  row("possibles", std::to_string(r.possibles.size()));
  row("nonlinks", std::to_string(r.nonlinks.size()));
  row("upper_threshold", format_double(r.thresholds.t_mu));
  row("lower_threshold", format_double(r.thresholds.t_lambda));
  row("em_fitted", r.fitted ? "1" : "0");
  row("em_iterations", std::to_string(r.em_iterations));
  row("match_prior", format_double(r.model.p));
  if (q) {
    row("true_positives", std::to_string(q->true_positives));
    row("precision", format_double(q->precision));
    row("recall", format_double(q->recall));
    row("f1", format_double(q->f1));
  }
  return out;
}

// Link and possible pairs, links first, each group in candidate order.
inline std::string format_link_pairs(const LinkageResult& r) {
  std::string out = "id_a,id_b,score,decision\n";
  for (const auto& p : r.links) out += csv_cell(p.id_a) + "," + csv_cell(p.id_b) + "," + format_double(p.score) + ",link\n";
  for (const auto& p : r.possibles)
    out += csv_cell(p.id_a) + "," + csv_cell(p.id_b) + "," + format_double(p.score) + ",possible\n";
  return out;
}

}  // namespace linkguard::linkage

#endif  // LINKGUARD_LINKAGE_IO_HPP_

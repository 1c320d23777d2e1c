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

// Selective-revelation gate.
//
// Query line:   query_id,actor,level,selection,output
//   selection:  '*' or clauses 'column op value' joined by '&',
//               op in < <= > >= == !=
//   output:     rows | mean | sum
//
// Policy file (key = value):
//   levels = N
//   level.<i>.max_risk = r          non-decreasing in i, within [0, 1]
//   level.<i>.method   = microaggregate | noise | identity
//   level.<i>.k, level.<i>.stat     microaggregate only
//   level.<i>.lambda, level.<i>.seed noise only
//
// At level L the plans of levels L, L-1, ..., 0 are tried in turn on the
// selected rows; the first whose measured re-identification risk is within
// max_risk(L) is released. A release at L therefore implies a release at
// every higher level. Responses carry released values only, never ids or
// source rows. Every evaluation, refused or not, is appended to the audit log.

#ifndef LINKGUARD_DISCLOSURE_GATE_HPP_
#define LINKGUARD_DISCLOSURE_GATE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "linkguard/disclosure/audit.hpp"
#include "linkguard/disclosure/methods.hpp"
#include "linkguard/disclosure/metrics.hpp"
#include "linkguard/disclosure/microtable.hpp"
#include "linkguard/errors.hpp"
#include "linkguard/kvconfig.hpp"
#include "linkguard/sha256.hpp"
#include "linkguard/text.hpp"

namespace linkguard::disclosure {

struct PolicyLevel {
  std::size_t level = 0;
  double max_risk = 0.0;
  ReleasePlan plan;
};

struct Policy {
  std::vector<PolicyLevel> levels;

  void validate() const {
    if (levels.empty()) throw ArgumentError("policy: no levels");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto& l = levels[i];
      if (l.level != i) throw ArgumentError("policy: levels must be numbered 0..N-1");
      if (!(l.max_risk >= 0.0 && l.max_risk <= 1.0)) throw ArgumentError("policy: max_risk outside [0, 1]");
      if (i > 0 && l.max_risk < levels[i - 1].max_risk) throw ArgumentError("policy: max_risk must be non-decreasing");
      l.plan.validate();
    }
  }
};

inline Policy parse_policy(const KeyValueConfig& cfg) {
  const auto n = cfg.get_int("levels");
  if (n < 1 || n > 1000) throw ArgumentError("policy: levels must be in [1, 1000]");
  Policy p;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::string pre = "level." + std::to_string(i) + ".";
    PolicyLevel l;
    l.level = static_cast<std::size_t>(i);
    l.max_risk = cfg.get_double(pre + "max_risk");
    const std::string method = cfg.get(pre + "method");
    if (method == "microaggregate") {
      const auto k = cfg.get_int(pre + "k");
      if (k < 2) throw ArgumentError("policy: " + pre + "k must be at least 2");
      l.plan = ReleasePlan::microaggregation(static_cast<std::size_t>(k), parse_stat(cfg.get_or(pre + "stat", "mean")));
    } else if (method == "noise") {
      const auto seed = cfg.get_int(pre + "seed");
      if (seed < 0) throw ArgumentError("policy: " + pre + "seed must be non-negative");
      l.plan = ReleasePlan::noise(cfg.get_double(pre + "lambda"), static_cast<std::uint64_t>(seed));
    } else if (method == "identity") {
      l.plan = ReleasePlan::identity();
    } else {
      throw ArgumentError("policy: unknown method '" + method + "' for level " + std::to_string(i));
    }
    p.levels.push_back(l);
  }
  p.validate();
  return p;
}

inline std::string format_policy(const Policy& p) {
  std::string out = "levels = " + std::to_string(p.levels.size()) + "\n";
  for (const auto& l : p.levels) {
    const std::string pre = "level." + std::to_string(l.level) + ".";
    out += pre + "max_risk = " + format_double(l.max_risk) + "\n";
    if (l.plan.is_identity()) {
      out += pre + "method = identity\n";
    } else if (l.plan.method == ReleasePlan::Method::kMicroaggregate) {
      out += pre + "method = microaggregate\n" + pre + "k = " + std::to_string(l.plan.k) + "\n" + pre +
             "stat = " + std::string(to_string(l.plan.stat)) + "\n";
    } else {
      out += pre + "method = noise\n" + pre + "lambda = " + format_double(l.plan.lambda) + "\n" + pre +
             "seed = " + std::to_string(l.plan.seed) + "\n";
    }
  }
  return out;
}

enum class CompareOp { kLt, kLe, kGt, kGe, kEq, kNe };

struct Clause {
  std::string column;
  CompareOp op = CompareOp::kEq;
  double value = 0.0;

  bool holds(double x) const {
    switch (op) {
      case CompareOp::kLt: return x < value;
      case CompareOp::kLe: return x <= value;
      case CompareOp::kGt: return x > value;
      case CompareOp::kGe: return x >= value;
      case CompareOp::kEq: return x == value;
      case CompareOp::kNe: return x != value;
    }
    return false;
  }
};

enum class OutputKind { kRows, kMean, kSum };

inline std::string_view to_string(OutputKind k) {
  switch (k) {
    case OutputKind::kRows: return "rows";
    case OutputKind::kMean: return "mean";
    case OutputKind::kSum: return "sum";
  }
  return "?";
}

struct Query {
  std::string id;
  std::string actor;
  std::size_t level = 0;
  std::vector<Clause> clauses;  // empty selects every row
  OutputKind output = OutputKind::kRows;
};

// Throws ArgumentError on any malformed field.
inline Query parse_query(std::string_view line) {
  const auto cells = split(line, ',');
  if (cells.size() != 5) throw ArgumentError("query: expected 5 comma-separated fields");
  Query q;
  q.id = std::string(trim(cells[0]));
  q.actor = std::string(trim(cells[1]));
  if (q.id.empty() || q.actor.empty()) throw ArgumentError("query: empty id or actor");
  const auto level = parse_int(trim(cells[2]));
  if (!level || *level < 0) throw ArgumentError("query: bad level");
  q.level = static_cast<std::size_t>(*level);

  const std::string_view sel = trim(cells[3]);
  if (sel != "*") {
    for (const auto& raw : split(sel, '&')) {
      const std::string_view c = trim(raw);
      static constexpr std::pair<std::string_view, CompareOp> kOps[] = {
          {"<=", CompareOp::kLe}, {">=", CompareOp::kGe}, {"==", CompareOp::kEq},
          {"!=", CompareOp::kNe}, {"<", CompareOp::kLt},  {">", CompareOp::kGt}};
      std::optional<Clause> clause;
      for (const auto& [tok, op] : kOps) {
        const auto at = c.find(tok);
        if (at == std::string_view::npos) continue;
        const auto value = parse_double(trim(c.substr(at + tok.size())));
        const std::string column(trim(c.substr(0, at)));
        if (!value || column.empty()) throw ArgumentError("query: bad clause '" + std::string(c) + "'");
        clause = Clause{column, op, *value};
        break;
      }
      if (!clause) throw ArgumentError("query: no operator in clause '" + std::string(c) + "'");
      q.clauses.push_back(*clause);
    }
  }

  const std::string_view out = trim(cells[4]);
  if (out == "rows") q.output = OutputKind::kRows;
  else if (out == "mean") q.output = OutputKind::kMean;
  else if (out == "sum") q.output = OutputKind::kSum;
  else throw ArgumentError("query: unknown output '" + std::string(out) + "'");
  return q;
}

inline Microtable select_rows(const Microtable& t, const std::vector<Clause>& clauses) {
  std::vector<std::size_t> cols;
  for (const auto& c : clauses) {
    auto idx = t.column_index(c.column);
    if (!idx) throw ArgumentError("query: unknown column '" + c.column + "'");
    cols.push_back(*idx);
  }
  Microtable out;
  out.columns = t.columns;
  for (std::size_t r = 0; r < t.size(); ++r) {
    bool keep = true;
    for (std::size_t j = 0; j < clauses.size() && keep; ++j) keep = clauses[j].holds(t.rows[r][cols[j]]);
    if (keep) {
      out.ids.push_back(t.ids[r]);
      out.rows.push_back(t.rows[r]);
    }
  }
  return out;
}

// Released values only. Rows are unlabelled; aggregates are a single row.
struct GateResponse {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> values;
};

struct GateDecision {
  std::string query_id;
  std::string actor;
  std::size_t level = 0;
  bool released = false;
  std::optional<std::size_t> plan_level;  // whose plan produced the release
  double measured_risk = 0.0;
  std::string reason;  // refusal reason; empty on release
  std::optional<GateResponse> response;
  std::string query_digest;
  std::string response_digest;
};

inline std::string serialize_response(const GateDecision& d) {
  std::string out = d.released ? "release," : "refuse,";
  out += d.query_id + "," + std::to_string(d.level) + ",";
  if (!d.released) return out + d.reason;
  out += std::to_string(*d.plan_level) + "," + format_double(d.measured_risk);
  for (const auto& row : d.response->values) {
    out += "\n";
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + format_double(row[c]);
  }
  return out;
}

namespace detail {

inline GateResponse shape_response(const Microtable& released, OutputKind kind) {
  GateResponse r;
  r.columns = released.columns;
  if (kind == OutputKind::kRows) {
    r.values = released.rows;
    return r;
  }
  std::vector<double> acc(released.width(), 0.0);
  for (const auto& row : released.rows)
    for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += row[c];
  if (kind == OutputKind::kMean)
    for (auto& v : acc) v /= static_cast<double>(released.size());
  r.values.push_back(std::move(acc));
  return r;
}

}  // namespace detail

// Pure decision for one query line; does not touch the audit log.
inline GateDecision gate_decide(std::string_view line, const Policy& policy, const Microtable& t) {
  GateDecision d;
  d.query_digest = sha256_hex(line);
  Query q;
  try {
    q = parse_query(line);
    d.query_id = q.id;
    d.actor = q.actor;
    d.level = q.level;
    if (q.level >= policy.levels.size()) throw ArgumentError("query: level " + std::to_string(q.level) + " not in policy");
  } catch (const ArgumentError& e) {
    d.reason = std::string("malformed: ") + e.what();
    d.response_digest = sha256_hex(serialize_response(d));
    return d;
  }

  Microtable sel;
  try {
    sel = select_rows(t, q.clauses);
  } catch (const ArgumentError& e) {
    d.reason = std::string("malformed: ") + e.what();
    d.response_digest = sha256_hex(serialize_response(d));
    return d;
  }

  const double ceiling = policy.levels[q.level].max_risk;
  if (sel.size() == 0) {
    d.reason = "empty selection";
  } else {
    d.reason = "risk above max_risk " + format_double(ceiling) + " for every admissible plan";
    bool any_feasible = false;
    for (std::size_t l = q.level + 1; l-- > 0;) {
      const ReleasePlan& plan = policy.levels[l].plan;
      if (!plan.feasible(sel)) continue;
      any_feasible = true;
      const Microtable released = plan.apply(sel);
      const double risk = reident_risk(sel, released);
      if (risk <= ceiling) {
        d.released = true;
        d.plan_level = l;
        d.measured_risk = risk;
        d.reason.clear();
        d.response = detail::shape_response(released, q.output);
        break;
      }
    }
    if (!any_feasible) d.reason = "selection smaller than every admissible group size";
  }
  d.response_digest = sha256_hex(serialize_response(d));
  return d;
}

// Decides and records. The actor of a malformed line is recorded as given
// when parseable, otherwise as "?".
inline GateDecision gate_evaluate(std::string_view line, const Policy& policy, const Microtable& t, AuditLog& log) {
  GateDecision d = gate_decide(line, policy, t);
  log.append(d.actor.empty() ? "?" : d.actor, d.query_digest, d.response_digest);
  return d;
}

}  // namespace linkguard::disclosure

#endif  // LINKGUARD_DISCLOSURE_GATE_HPP_

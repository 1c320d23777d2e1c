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

// Unsupervised estimation of (m, u, p) by EM on the two-class latent mixture
// with conditionally independent features.
//
// Comparison vectors are first collapsed into distinct patterns with
// multiplicities; the E-step is a map over patterns with an associative sum,
// the M-step is the exact maximiser of the expected complete-data
// log-likelihood over the box [floor, 1 - floor] (see project_with_floor),
// so the observed log-likelihood never decreases.

#ifndef LINKGUARD_LINKAGE_EM_HPP_
#define LINKGUARD_LINKAGE_EM_HPP_

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "linkguard/errors.hpp"
#include "linkguard/linkage/model.hpp"

namespace linkguard::linkage {

struct EmOptions {
  int max_iter = 500;
  double tol = 1e-8;
  double floor = kDefaultProbabilityFloor;
};

struct EmTrace {
  LinkageModel model;
  int iterations = 0;
  bool converged = false;
  // Observed-data log-likelihood at the initial and every updated parameter
  // set, so log_likelihood.size() == iterations + 1.
  std::vector<double> log_likelihood;
};

// argmax_x sum_l counts[l] * log(x[l]) subject to sum x = 1, x[l] >= floor.
// KKT gives x[l] = max(floor, counts[l] / tau); the active set only grows,
// so fixing every violator and rescaling the rest converges in <= L rounds.
inline std::vector<double> project_with_floor(const std::vector<double>& counts, double floor) {
  const std::size_t n = counts.size();
  std::vector<double> x(n, 0.0);
  std::vector<bool> pinned(n, false);
  while (true) {
    std::size_t pinned_count = 0;
    double free_total = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      if (pinned[l]) {
        ++pinned_count;
      } else {
        free_total += counts[l];
      }
    }
    const double free_mass = 1.0 - static_cast<double>(pinned_count) * floor;
    const std::size_t free_count = n - pinned_count;
    bool changed = false;
    for (std::size_t l = 0; l < n; ++l) {
      if (pinned[l]) {
        x[l] = floor;
        continue;
      }
      x[l] = free_total > 0.0 ? free_mass * counts[l] / free_total
                              : free_mass / static_cast<double>(free_count);
      if (x[l] < floor) {
        pinned[l] = true;
        changed = true;
      }
    }
    if (!changed) return x;
  }
}

namespace detail {

struct Pattern {
  ComparisonVector gamma;
  double count = 0.0;
};

inline std::vector<Pattern> collapse(const std::vector<ComparisonVector>& gammas) {
  std::map<ComparisonVector, double> counts;
  for (const auto& g : gammas) counts[g] += 1.0;
  std::vector<Pattern> out;
  out.reserve(counts.size());
  for (auto& [g, c] : counts) out.push_back({g, c});
  return out;
}

// Posterior match probability per pattern plus total log-likelihood.
inline double e_step(const std::vector<Pattern>& patterns, const LinkageModel& model,
                     std::vector<double>& posterior) {
  posterior.resize(patterns.size());
  double loglik = 0.0;
  const double log_p = std::log(model.p);
  const double log_q = std::log1p(-model.p);
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const auto& g = patterns[i].gamma;
    double lm = log_p;
    double lu = log_q;
    for (std::size_t f = 0; f < g.levels.size(); ++f) {
      if (g.missing[f]) continue;
      lm += std::log(model.m[f][g.levels[f]]);
      lu += std::log(model.u[f][g.levels[f]]);
    }
    const double hi = std::max(lm, lu);
    const double lse = hi + std::log(std::exp(lm - hi) + std::exp(lu - hi));
    posterior[i] = std::exp(lm - lse);
    loglik += patterns[i].count * lse;
  }
  return loglik;
}

inline LinkageModel m_step(const std::vector<Pattern>& patterns, const std::vector<double>& posterior,
                           const LinkageModel& current, double floor) {
  LinkageModel next = current;
  double total = 0.0;
  double matched = 0.0;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    total += patterns[i].count;
    matched += patterns[i].count * posterior[i];
  }
  next.p = project_with_floor({matched, total - matched}, floor)[0];
  for (std::size_t f = 0; f < current.feature_count(); ++f) {
    std::vector<double> cm(current.arity(f), 0.0);
    std::vector<double> cu(current.arity(f), 0.0);
    double observed = 0.0;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      const auto& g = patterns[i].gamma;
      if (g.missing[f]) continue;
      cm[g.levels[f]] += patterns[i].count * posterior[i];
      cu[g.levels[f]] += patterns[i].count * (1.0 - posterior[i]);
      observed += patterns[i].count;
    }
    if (observed == 0.0) continue;  // feature never observed: keep current
    next.m[f] = project_with_floor(cm, floor);
    next.u[f] = project_with_floor(cu, floor);
  }
  return next;
}

inline double max_change(const LinkageModel& a, const LinkageModel& b) {
  double d = std::abs(a.p - b.p);
  for (std::size_t f = 0; f < a.m.size(); ++f)
    for (std::size_t l = 0; l < a.m[f].size(); ++l)
      d = std::max({d, std::abs(a.m[f][l] - b.m[f][l]), std::abs(a.u[f][l] - b.u[f][l])});
  return d;
}

}  // namespace detail

inline EmTrace fit_em_traced(const std::vector<ComparisonVector>& gammas, const LinkageModel& init,
                             const EmOptions& opts = {}) {
  if (gammas.empty()) throw ArgumentError("fit_em: no comparison vectors");
  if (opts.max_iter < 0 || !(opts.floor > 0.0 && opts.floor < 0.5))
    throw ArgumentError("fit_em: invalid options");
  init.validate(opts.floor);
  for (const auto& g : gammas) init.check_shape(g);

  const auto patterns = detail::collapse(gammas);
  EmTrace trace;
  trace.model = init;
  std::vector<double> posterior;
  trace.log_likelihood.push_back(detail::e_step(patterns, trace.model, posterior));
  while (trace.iterations < opts.max_iter) {
    LinkageModel next = detail::m_step(patterns, posterior, trace.model, opts.floor);
    const double change = detail::max_change(next, trace.model);
    trace.model = std::move(next);
    ++trace.iterations;
    trace.log_likelihood.push_back(detail::e_step(patterns, trace.model, posterior));
    if (change < opts.tol) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

inline LinkageModel fit_em(const std::vector<ComparisonVector>& gammas, const LinkageModel& init,
                           const EmOptions& opts = {}) {
  return fit_em_traced(gammas, init, opts).model;
}

// Observed-data log-likelihood of the two-class mixture.
inline double mixture_log_likelihood(const std::vector<ComparisonVector>& gammas, const LinkageModel& model) {
  const auto patterns = detail::collapse(gammas);
  std::vector<double> posterior;
  return detail::e_step(patterns, model, posterior);
}

}  // namespace linkguard::linkage

#endif  // LINKGUARD_LINKAGE_EM_HPP_

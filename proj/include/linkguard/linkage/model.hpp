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

#ifndef LINKGUARD_LINKAGE_MODEL_HPP_
#define LINKGUARD_LINKAGE_MODEL_HPP_

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "linkguard/errors.hpp"
#include "linkguard/linkage/compare.hpp"

namespace linkguard::linkage {

inline constexpr double kDefaultProbabilityFloor = 1e-4;

// Conditional-independence Fellegi-Sunter model: m[f][l] = P(level l | match),
// u[f][l] = P(level l | non-match), p = prior match probability.
struct LinkageModel {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> u;
  double p = 0.05;

  std::size_t feature_count() const { return m.size(); }
  std::size_t arity(std::size_t feature) const { return m[feature].size(); }

  // Starting point: full agreement gets 0.9 under M and 0.1 under U, the
  // remaining mass is spread evenly over the lower levels.
  static LinkageModel initial(const std::vector<std::size_t>& arities, double m_agree = 0.9,
                              double u_agree = 0.1, double prior = 0.05) {
    LinkageModel model;
    model.p = prior;
    for (std::size_t a : arities) {
      if (a < 2) throw ArgumentError("linkage model: every feature needs at least two levels");
      std::vector<double> mf(a, (1.0 - m_agree) / static_cast<double>(a - 1));
      std::vector<double> uf(a, (1.0 - u_agree) / static_cast<double>(a - 1));
      mf.back() = m_agree;
      uf.back() = u_agree;
      model.m.push_back(std::move(mf));
      model.u.push_back(std::move(uf));
    }
    return model;
  }

  static LinkageModel initial(const std::vector<FeatureSpec>& specs) {
    std::vector<std::size_t> arities;
    for (const auto& s : specs) arities.push_back(s.arity());
    return initial(arities);
  }

  void validate(double floor = kDefaultProbabilityFloor) const {
    constexpr double kSumTolerance = 1e-9;
    const double slack = 1e-12;
    if (m.size() != u.size() || m.empty()) throw ArgumentError("linkage model: m and u shapes differ");
    auto check_entry = [&](double v, std::string_view what) {
      if (!(v >= floor - slack && v <= 1.0 - floor + slack))
        throw ArgumentError("linkage model: " + std::string(what) + " entry " + std::to_string(v) +
                            " outside [floor, 1 - floor]");
    };
    check_entry(p, "prior");
    for (std::size_t f = 0; f < m.size(); ++f) {
      if (m[f].size() != u[f].size() || m[f].size() < 2)
        throw ArgumentError("linkage model: feature " + std::to_string(f) + " has inconsistent arity");
      double sm = 0.0;
      double su = 0.0;
      for (std::size_t l = 0; l < m[f].size(); ++l) {
        check_entry(m[f][l], "m");
        check_entry(u[f][l], "u");
        sm += m[f][l];
        su += u[f][l];
      }
      if (std::abs(sm - 1.0) > kSumTolerance || std::abs(su - 1.0) > kSumTolerance)
        throw ArgumentError("linkage model: feature " + std::to_string(f) + " probabilities do not sum to 1");
    }
  }

  void check_shape(const ComparisonVector& gamma) const {
    if (gamma.levels.size() != m.size() || gamma.missing.size() != m.size())
      throw ArgumentError("comparison vector has " + std::to_string(gamma.levels.size()) +
                          " features, model has " + std::to_string(m.size()));
    for (std::size_t f = 0; f < m.size(); ++f)
      if (gamma.levels[f] < 0 || static_cast<std::size_t>(gamma.levels[f]) >= m[f].size())
        throw ArgumentError("comparison vector level out of range for feature " + std::to_string(f));
  }
};

// log(m / u) for one feature outcome. Natural log throughout.
inline double feature_weight(const LinkageModel& model, std::size_t feature, int level) {
  return std::log(model.m[feature][level] / model.u[feature][level]);
}

// Sum of per-feature log likelihood ratios; missing features contribute 0.
inline double agreement_weight(const ComparisonVector& gamma, const LinkageModel& model) {
  model.check_shape(gamma);
  double w = 0.0;
  for (std::size_t f = 0; f < gamma.levels.size(); ++f)
    if (!gamma.missing[f]) w += feature_weight(model, f, gamma.levels[f]);
  return w;
}

struct Thresholds {
  double t_mu = std::numeric_limits<double>::infinity();       // link strictly above
  double t_lambda = -std::numeric_limits<double>::infinity();  // non-link strictly below

  void validate() const {
    if (std::isnan(t_mu) || std::isnan(t_lambda) || t_lambda > t_mu)
      throw ArgumentError("thresholds: require t_lambda <= t_mu");
  }
};

enum class Decision { kLink, kPossible, kNonLink };

inline std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::kLink:
      return "link";
    case Decision::kPossible:
      return "possible";
    case Decision::kNonLink:
      return "nonlink";
  }
  return "possible";
}

// Boundary scores are Possible.
inline Decision classify(double score, const Thresholds& th) {
  if (score > th.t_mu) return Decision::kLink;
  if (score < th.t_lambda) return Decision::kNonLink;
  return Decision::kPossible;
}

}  // namespace linkguard::linkage

#endif  // LINKGUARD_LINKAGE_MODEL_HPP_

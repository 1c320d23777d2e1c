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

// Distribution of the number of correct links obtained by pairing two files
// of the same n individuals through a uniformly random permutation: the
// number of fixed points of a random permutation,
//
//   P(r) = (1/r!) * sum_{v=0}^{n-r} (-1)^v / v!
//        = D(n-r) / ((n-r)! r!),
//
// where D(m) = m! * sum_{v=0}^{m} (-1)^v / v! is the derangement count.
// Everything is evaluated in exact integer arithmetic and rounded to double
// only at the boundary.

#ifndef LINKGUARD_BASELINE_HPP_
#define LINKGUARD_BASELINE_HPP_

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "linkguard/errors.hpp"

namespace linkguard::baseline {

inline constexpr unsigned kDefaultTableCap = 10000;

struct MatchPmf {
  unsigned n = 0;
  std::vector<double> probs;  // probs[r], r = 0..n
};

struct MatchMoments {
  double mean = 0.0;
  double variance = 0.0;
};

// Correctly rounded num/den for positive integers (round-half-even on the
// 64-bit truncated quotient with a sticky bit). Results in the subnormal
// range may be rounded twice.
inline double ratio_to_double(const mpz_class& num, const mpz_class& den) {
  if (sgn(den) <= 0) throw ArgumentError("ratio_to_double: denominator must be positive");
  if (sgn(num) == 0) return 0.0;
  if (sgn(num) < 0) return -ratio_to_double(-num, den);
  const long num_bits = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
  const long den_bits = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  const long shift = 63 + den_bits - num_bits;  // quotient lands in [2^62, 2^64)
  mpz_class scaled_num = num;
  mpz_class scaled_den = den;
  if (shift >= 0) {
    mpz_mul_2exp(scaled_num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  } else {
    mpz_mul_2exp(scaled_den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
  }
  mpz_class quot;
  mpz_class rem;
  mpz_tdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), scaled_num.get_mpz_t(), scaled_den.get_mpz_t());
  std::uint64_t q = 0;
  mpz_export(&q, nullptr, -1, sizeof(q), 0, 0, quot.get_mpz_t());
  if (sgn(rem) != 0) q |= 1;
  return std::ldexp(static_cast<double>(q), static_cast<int>(-shift));
}

inline double to_double(const mpq_class& value) {
  return ratio_to_double(value.get_num(), value.get_den());
}

inline mpz_class factorial(unsigned m) {
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), m);
  return out;
}

// D(m) = m * D(m-1) + (-1)^m, D(0) = 1.
inline mpz_class derangements(unsigned m) {
  mpz_class d = 1;
  for (unsigned k = 1; k <= m; ++k) {
    d *= k;
    if (k % 2 == 0) {
      d += 1;
    } else {
      d -= 1;
    }
  }
  return d;
}

inline void check_range(unsigned n, long long r) {
  if (n < 1) throw ArgumentError("baseline: n must be at least 1");
  if (r < 0 || r > static_cast<long long>(n))
    throw ArgumentError("baseline: r must lie in [0, n], got r=" + std::to_string(r) +
                        " for n=" + std::to_string(n));
}

// Exact probability of exactly r correct matches among n.
inline mpq_class exact_match_probability(unsigned n, long long r) {
  check_range(n, r);
  const unsigned fixed = static_cast<unsigned>(r);
  const unsigned rest = n - fixed;
  mpq_class p(derangements(rest), factorial(rest) * factorial(fixed));
  p.canonicalize();
  return p;
}

inline double exact_match_pmf(unsigned n, long long r) { return to_double(exact_match_probability(n, r)); }

// Full table r = 0..n. Entries with r beyond kNegligibleR are below half the
// smallest subnormal (P(r) <= 1/r!) and are exactly 0.0 after rounding.
inline MatchPmf pmf_table(unsigned n, unsigned cap = kDefaultTableCap) {
  if (n < 1) throw ArgumentError("pmf_table: n must be at least 1");
  if (n > cap)
    throw CapacityError("pmf_table: n=" + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  constexpr unsigned kNegligibleR = 200;
  MatchPmf table;
  table.n = n;
  table.probs.assign(n + 1, 0.0);
  mpz_class d = 1;     // D(m)
  mpz_class fact = 1;  // m!
  for (unsigned m = 0; m <= n; ++m) {
    if (m > 0) {
      d *= m;
      if (m % 2 == 0) {
        d += 1;
      } else {
        d -= 1;
      }
      fact *= m;
    }
    const unsigned r = n - m;
    if (r <= kNegligibleR) table.probs[r] = ratio_to_double(d, fact * factorial(r));
  }
  return table;
}

// Mean and variance of the table, accumulated exactly over the common
// denominator n!: P(r) * n! = C(n, r) * D(n - r).
inline MatchMoments exact_match_moments(unsigned n, unsigned cap = kDefaultTableCap) {
  if (n < 1) throw ArgumentError("exact_match_moments: n must be at least 1");
  if (n > cap)
    throw CapacityError("exact_match_moments: n=" + std::to_string(n) + " exceeds cap " +
                        std::to_string(cap));
  mpz_class d = 1;
  mpz_class binom = 1;  // C(n, m)
  mpz_class total = 0;
  mpz_class first = 0;
  mpz_class second = 0;
  for (unsigned m = 0; m <= n; ++m) {
    if (m > 0) {
      d *= m;
      if (m % 2 == 0) {
        d += 1;
      } else {
        d -= 1;
      }
      binom *= (n - m + 1);
      mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), m);
    }
    const mpz_class weight = binom * d;
    const unsigned long r = n - m;
    total += weight;
    first += weight * r;
    second += weight * r * r;
  }
  mpq_class mean(first, total);
  mean.canonicalize();
  mpq_class raw_second(second, total);
  raw_second.canonicalize();
  const mpq_class variance = raw_second - mean * mean;
  return {to_double(mean), to_double(variance)};
}

}  // namespace linkguard::baseline

#endif  // LINKGUARD_BASELINE_HPP_

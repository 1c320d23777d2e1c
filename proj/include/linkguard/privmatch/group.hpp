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

#ifndef LINKGUARD_PRIVMATCH_GROUP_HPP_
#define LINKGUARD_PRIVMATCH_GROUP_HPP_

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linkguard/errors.hpp"
#include "linkguard/kvconfig.hpp"
#include "linkguard/rng.hpp"
#include "linkguard/sha256.hpp"

namespace linkguard::privmatch {

using Bytes = std::vector<std::uint8_t>;

inline constexpr unsigned kMinModulusBits = 256;
inline constexpr unsigned kMaxModulusBits = 4096;
inline constexpr int kPrimalityReps = 40;

// Minimal big-endian magnitude; zero encodes as the empty string.
inline Bytes to_bytes(const mpz_class& v) {
  if (v < 0) throw ArgumentError("to_bytes: negative integer");
  Bytes out((mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8);
  if (v == 0) return {};
  std::size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, v.get_mpz_t());
  out.resize(written);
  return out;
}

inline mpz_class from_bytes(std::span<const std::uint8_t> bytes) {
  mpz_class v;
  if (!bytes.empty()) mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return v;
}

inline bool probably_prime(const mpz_class& v) { return mpz_probab_prime_p(v.get_mpz_t(), kPrimalityReps) != 0; }

// Safe-prime group: p = 2q + 1 with p, q prime. Arithmetic happens in the
// order-q subgroup of quadratic residues.
struct DomainParams {
  mpz_class p;
  mpz_class q;
  unsigned bits = 0;
  bool toy = false;  // below the minimum size; accepted only when explicitly allowed

  void validate(bool allow_toy = false) const {
    if (p != 2 * q + 1) throw ArgumentError("domain params: p != 2q + 1");
    if (q < 3 || !probably_prime(q) || !probably_prime(p)) throw ArgumentError("domain params: p and q must be prime");
    if (bits != mpz_sizeinbase(p.get_mpz_t(), 2)) throw ArgumentError("domain params: bit length mismatch");
    if (bits > kMaxModulusBits) throw ArgumentError("domain params: modulus too large");
    if (bits < kMinModulusBits && !(allow_toy && toy))
      throw ArgumentError("domain params: modulus below " + std::to_string(kMinModulusBits) +
                          " bits requires the explicit toy flag");
  }

  std::size_t element_bytes() const { return (bits + 7) / 8; }

  friend bool operator==(const DomainParams& a, const DomainParams& b) {
    return a.p == b.p && a.q == b.q && a.bits == b.bits && a.toy == b.toy;
  }
};

inline DomainParams make_params(const mpz_class& p, bool toy = false) {
  DomainParams d;
  d.p = p;
  d.q = (p - 1) / 2;
  d.bits = static_cast<unsigned>(mpz_sizeinbase(p.get_mpz_t(), 2));
  d.toy = toy;
  return d;
}

// p = 23, q = 11. For worked examples and tests only.
inline DomainParams toy_params() { return make_params(23, true); }

namespace detail {

// Deterministic byte stream: SHA-256(label || seed || counter) blocks.
inline Bytes expand(std::string_view label, std::span<const std::uint8_t> seed, std::uint32_t counter,
                    std::size_t length) {
  Bytes out;
  for (std::uint32_t block = 0; out.size() < length; ++block) {
    Sha256 h;
    h.update(label);
    h.update(seed);
    const std::array<std::uint8_t, 8> tail = {
        static_cast<std::uint8_t>(counter >> 24), static_cast<std::uint8_t>(counter >> 16),
        static_cast<std::uint8_t>(counter >> 8),  static_cast<std::uint8_t>(counter),
        static_cast<std::uint8_t>(block >> 24),   static_cast<std::uint8_t>(block >> 16),
        static_cast<std::uint8_t>(block >> 8),    static_cast<std::uint8_t>(block)};
    h.update(tail);
    const Digest d = h.finish();
    out.insert(out.end(), d.begin(), d.end());
  }
  out.resize(length);
  return out;
}

inline const std::vector<unsigned long>& small_primes() {
  static const std::vector<unsigned long> primes = [] {
    std::vector<unsigned long> out;
    for (unsigned long n = 3; n < 2000; n += 2) {
      bool prime = true;
      for (unsigned long d : out) {
        if (d * d > n) break;
        if (n % d == 0) {
          prime = false;
          break;
        }
      }
      if (prime) out.push_back(n);
    }
    return out;
  }();
  return primes;
}

}  // namespace detail

// Deterministic safe-prime search. Each attempt seeds an odd (bits-1)-bit q
// with its top bit set and walks q += 2 under a small-prime sieve on both q
// and 2q + 1.
inline DomainParams derive_group(unsigned bits, std::span<const std::uint8_t> seed, int max_attempts = 16) {
  if (bits < kMinModulusBits || bits > kMaxModulusBits)
    throw ArgumentError("derive_group: bits must lie in [" + std::to_string(kMinModulusBits) + ", " +
                        std::to_string(kMaxModulusBits) + "]");
  constexpr unsigned long kWindow = 1ul << 20;
  const auto& primes = detail::small_primes();
  const unsigned qbits = bits - 1;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const Bytes raw = detail::expand("linkguard.group", seed, static_cast<std::uint32_t>(attempt), (qbits + 7) / 8);
    mpz_class q = from_bytes(raw);
    mpz_fdiv_r_2exp(q.get_mpz_t(), q.get_mpz_t(), qbits);
    mpz_setbit(q.get_mpz_t(), qbits - 1);
    mpz_setbit(q.get_mpz_t(), 0);
    std::vector<unsigned long> residue(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i) residue[i] = mpz_fdiv_ui(q.get_mpz_t(), primes[i]);
    for (unsigned long step = 0; step < kWindow; step += 2) {
      bool sieved = false;
      for (std::size_t i = 0; i < primes.size() && !sieved; ++i) {
        const unsigned long r = (residue[i] + step) % primes[i];
        sieved = r == 0 || (2 * r + 1) % primes[i] == 0;
      }
      if (sieved) continue;
      const mpz_class cand = q + step;
      if (mpz_sizeinbase(cand.get_mpz_t(), 2) != qbits) break;
      if (!probably_prime(cand)) continue;
      const mpz_class p = 2 * cand + 1;
      if (!probably_prime(p)) continue;
      return make_params(p);
    }
  }
  throw CapacityError("derive_group: no safe prime found within the attempt budget");
}

inline DomainParams derive_group(unsigned bits, std::string_view seed) {
  return derive_group(bits, std::span(reinterpret_cast<const std::uint8_t*>(seed.data()), seed.size()));
}

// `p = <decimal>` and optional `toy = true`; q is implied.
inline std::string format_params(const DomainParams& d) {
  std::string out = "# safe-prime group, q = (p - 1) / 2\n";
  out += "bits = " + std::to_string(d.bits) + "\n";
  out += "p = " + d.p.get_str() + "\n";
  if (d.toy) out += "toy = true\n";
  return out;
}

inline DomainParams parse_params(const KeyValueConfig& cfg) {
  mpz_class p;
  if (p.set_str(cfg.get("p"), 10) != 0 || p < 5) throw ArgumentError("params: p is not a positive decimal integer");
  DomainParams d = make_params(p, cfg.get_or("toy", "false") == "true");
  if (auto b = cfg.find("bits"); b && *b != std::to_string(d.bits))
    throw ArgumentError("params: declared bits do not match p");
  return d;
}

// --------------------------------------------------------------- elements

struct GroupElement {
  mpz_class value;

  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.value == b.value; }
};

inline bool in_subgroup(const mpz_class& v, const DomainParams& d) {
  if (v < 1 || v >= d.p) return false;
  mpz_class r;
  mpz_powm(r.get_mpz_t(), v.get_mpz_t(), d.q.get_mpz_t(), d.p.get_mpz_t());
  return r == 1;
}

inline bool in_subgroup(const GroupElement& e, const DomainParams& d) { return in_subgroup(e.value, d); }

// Digest with a domain-separation counter, reduce mod p, square. A zero
// residue moves to the next counter.
inline GroupElement hash_to_group(std::span<const std::uint8_t> item, const DomainParams& d) {
  const std::size_t length = d.element_bytes() + 8;
  for (std::uint32_t counter = 0;; ++counter) {
    mpz_class x = from_bytes(detail::expand("linkguard.h2g", item, counter, length)) % d.p;
    if (x == 0) continue;
    GroupElement e;
    mpz_powm_ui(e.value.get_mpz_t(), x.get_mpz_t(), 2, d.p.get_mpz_t());
    return e;
  }
}

inline GroupElement hash_to_group(std::string_view item, const DomainParams& d) {
  return hash_to_group(std::span(reinterpret_cast<const std::uint8_t*>(item.data()), item.size()), d);
}

// Exponent in [2, q - 1]; coprime to q because q is prime.
struct PartyKey {
  mpz_class exponent;

  void validate(const DomainParams& d) const {
    if (exponent < 2 || exponent > d.q - 1) throw ArgumentError("party key: exponent outside [2, q - 1]");
  }

  static PartyKey random(const DomainParams& d, Rng& rng) {
    mpz_class wide = 0;
    for (unsigned i = 0; i < d.bits / 64 + 2; ++i) wide = (wide << 64) + mpz_class(std::to_string(rng.next()));
    PartyKey k{wide % (d.q - 2) + 2};
    k.validate(d);
    return k;
  }
};

inline GroupElement commute_encrypt(const PartyKey& key, const GroupElement& e, const DomainParams& d) {
  GroupElement out;
  mpz_powm(out.value.get_mpz_t(), e.value.get_mpz_t(), key.exponent.get_mpz_t(), d.p.get_mpz_t());
  return out;
}

}  // namespace linkguard::privmatch

#endif  // LINKGUARD_PRIVMATCH_GROUP_HPP_

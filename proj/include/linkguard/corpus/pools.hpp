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

// Bundled value pools for identity synthesis. Surnames are assembled from
// syllables, which gives ~24k distinct forms without shipping a name list.

#ifndef LINKGUARD_CORPUS_POOLS_HPP_
#define LINKGUARD_CORPUS_POOLS_HPP_

#include <array>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "linkguard/errors.hpp"
#include "linkguard/rng.hpp"

namespace linkguard::corpus {

inline constexpr std::array<std::string_view, 96> kFirstNames = {
    "AARON",   "ABIGAIL", "ADAM",    "ADRIAN",  "AGNES",   "ALAN",    "ALICE",   "AMELIA",
    "ANDREW",  "ANGELA",  "ANNA",    "ARTHUR",  "BARBARA", "BEATRIX", "BENJAMIN", "BERTRAND",
    "BRENDA",  "BRIAN",   "CAROL",   "CATHERINE", "CECILIA", "CHARLES", "CLARA",   "COLIN",
    "DANIEL",  "DAVID",   "DEBORAH", "DENISE",  "DIANA",   "DOMINIC", "DOROTHY", "EDGAR",
    "EDITH",   "EDWARD",  "ELAINE",  "ELENA",   "EMILY",   "ERIC",    "ESTHER",  "EUGENE",
    "FELIX",   "FIONA",   "FRANCIS", "GABRIEL", "GEORGE",  "GERALD",  "GLORIA",  "GRACE",
    "HANNAH",  "HAROLD",  "HELEN",   "HENRY",   "HUGO",    "IRENE",   "ISAAC",   "IVAN",
    "JACOB",   "JANET",   "JASPER",  "JOAN",    "JONAS",   "JOSEPH",  "JUDITH",  "JULIAN",
    "KAREN",   "KEITH",   "LAURA",   "LEON",    "LILLIAN", "LUCAS",   "MARGARET", "MARTIN",
    "MAXINE",  "MIRIAM",  "NATHAN",  "NINA",    "OLIVER",  "OLIVIA",  "OSCAR",   "PAULA",
    "PETER",   "RACHEL",  "RAYMOND", "ROSA",    "SAMUEL",  "SARAH",   "SIMON",   "SOPHIA",
    "THEODORE", "THERESA", "VICTOR", "VIOLET",  "WALTER",  "WENDY",   "XAVIER",  "YVONNE",
};

inline constexpr std::array<std::string_view, 40> kSurnameOnsets = {
    "AB", "AL", "AN", "AR", "BA", "BE", "BR", "CA", "CH", "CO", "DA", "DE", "DR", "EL",
    "FA", "FE", "GA", "GR", "HA", "HE", "KA", "KL", "LA", "LE", "MA", "ME", "MO", "NE",
    "OR", "PA", "PE", "RA", "RO", "SA", "SCH", "ST", "TA", "TR", "VA", "WE",
};

inline constexpr std::array<std::string_view, 20> kSurnameMiddles = {
    "",   "L", "N", "R", "S", "T", "LD", "ND", "RN", "ST",
    "CK", "M", "V", "RD", "NT", "LL", "SS", "RK", "DD", "W",
};

inline constexpr std::array<std::string_view, 30> kSurnameEndings = {
    "ER",  "SON", "MAN", "TON", "LEY", "EN",   "ING", "ARD", "OWSKI", "ETTE",
    "INI", "ANO", "AS",  "ES",  "IK",  "OVA",  "ELL", "ICK", "OTT",   "UND",
    "BERG", "FIELD", "WOOD", "WORTH", "HAM", "ESCU", "AKIS", "ENKO", "SEN", "Y",
};

inline std::string synth_surname(Rng& rng) {
  std::string out(kSurnameOnsets[rng.below(kSurnameOnsets.size())]);
  out += kSurnameMiddles[rng.below(kSurnameMiddles.size())];
  out += kSurnameEndings[rng.below(kSurnameEndings.size())];
  return out;
}

// `count` distinct surnames, deterministic per seed.
inline std::vector<std::string> surname_pool(std::size_t count, std::uint64_t seed) {
  constexpr std::size_t kDistinct = kSurnameOnsets.size() * kSurnameMiddles.size() * kSurnameEndings.size();
  if (count > kDistinct / 2)
    throw CapacityError("surname_pool: at most " + std::to_string(kDistinct / 2) + " names available");
  Rng rng(seed);
  std::unordered_set<std::string> seen;
  std::vector<std::string> out;
  out.reserve(count);
  while (out.size() < count) {
    std::string name = synth_surname(rng);
    if (seen.insert(name).second) out.push_back(std::move(name));
  }
  return out;
}

}  // namespace linkguard::corpus

#endif  // LINKGUARD_CORPUS_POOLS_HPP_

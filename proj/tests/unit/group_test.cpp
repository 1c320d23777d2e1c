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

#include "linkguard/privmatch/group.hpp"

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_int.hpp>

namespace linkguard::privmatch {
namespace {

using boost::multiprecision::cpp_int;

cpp_int to_cpp(const mpz_class& v) { return cpp_int(v.get_str()); }

// Square-and-multiply over cpp_int, independent of GMP.
cpp_int oracle_powm(cpp_int base, cpp_int exp, const cpp_int& mod) {
  cpp_int result = 1;
  base %= mod;
  while (exp > 0) {
    if ((exp & 1) != 0) result = (result * base) % mod;
    base = (base * base) % mod;
    exp >>= 1;
  }
  return result;
}

const DomainParams& params256() {
  static const DomainParams d = derive_group(256, "unit-test-group");
  return d;
}

TEST(DeriveGroup, DeterministicSafePrime) {
  const auto& d = params256();
  EXPECT_EQ(d.bits, 256u);
  EXPECT_EQ(d.p, 2 * d.q + 1);
  EXPECT_NO_THROW(d.validate());
  EXPECT_EQ(derive_group(256, "unit-test-group"), d);
  EXPECT_NE(derive_group(256, "another-seed").p, d.p);
}

TEST(DeriveGroup, RejectsTinyModulus) {
  EXPECT_THROW(derive_group(8, "s"), ArgumentError);
  EXPECT_THROW(toy_params().validate(false), ArgumentError);
  EXPECT_NO_THROW(toy_params().validate(true));
  EXPECT_EQ(toy_params().q, 11);
}

TEST(DeriveGroup, ValidateCatchesBadParams) {
  EXPECT_THROW(make_params(25, true).validate(true), ArgumentError);  // q = 12
  DomainParams d = params256();
  d.q += 2;
  EXPECT_THROW(d.validate(), ArgumentError);
}

TEST(DeriveGroup, ParamsFileRoundTrip) {
  const auto back = parse_params(KeyValueConfig::parse(format_params(params256())));
  EXPECT_EQ(back, params256());
  EXPECT_EQ(parse_params(KeyValueConfig::parse(format_params(toy_params()))), toy_params());
}

TEST(Bytes, MinimalBigEndian) {
  EXPECT_TRUE(to_bytes(0).empty());
  EXPECT_EQ(to_bytes(0x1234), (Bytes{0x12, 0x34}));
  EXPECT_EQ(from_bytes(Bytes{0x01, 0x00, 0x00}), 65536);
}

TEST(HashToGroup, LandsInSubgroupAndIsDeterministic) {
  for (const DomainParams& params : {params256(), toy_params()}) {
    for (int i = 0; i < 200; ++i) {
      const std::string item = "item-" + std::to_string(i);
      const auto e = hash_to_group(item, params);
      EXPECT_TRUE(in_subgroup(e, params)) << item;
      EXPECT_EQ(e, hash_to_group(item, params));
    }
  }
}

// Oracle recomputes the digest chain directly: SHA-256 over label, item,
// counter and block index, reduced and squared with cpp_int.
TEST(HashToGroup, ToyValuesMatchDirectComputation) {
  const auto toy = toy_params();
  auto oracle = [](const std::string& item) {
    Sha256 h;
    h.update(std::string_view("linkguard.h2g"));
    h.update(item);
    const std::array<std::uint8_t, 8> zeros{};
    h.update(zeros);
    const Digest dg = h.finish();
    cpp_int x = 0;
    for (int i = 0; i < 9; ++i) x = (x << 8) + dg[i];  // element_bytes(1) + 8
    x %= 23;
    return static_cast<int>((x * x) % 23);
  };
  for (const std::string item : {"alice", "bob"}) {
    const int expected = oracle(item);
    ASSERT_NE(expected, 0);
    EXPECT_EQ(hash_to_group(item, toy).value, expected) << item;
  }
  EXPECT_NE(hash_to_group("alice", toy), hash_to_group("bob", toy));
}

TEST(CommuteEncrypt, ToyWorkedExample) {
  const auto toy = toy_params();
  const GroupElement four{4};
  const PartyKey three{3}, seven{7};
  const auto a = commute_encrypt(three, four, toy);
  EXPECT_EQ(a.value, 18);
  EXPECT_EQ(commute_encrypt(seven, a, toy).value, 6);
  const auto b = commute_encrypt(seven, four, toy);
  EXPECT_EQ(b.value, 8);
  EXPECT_EQ(commute_encrypt(three, b, toy).value, 6);
}

TEST(CommuteEncrypt, SmallestKeySquares) {
  const auto toy = toy_params();
  EXPECT_THROW(PartyKey{1}.validate(toy), ArgumentError);
  EXPECT_THROW(PartyKey{11}.validate(toy), ArgumentError);
  EXPECT_EQ(commute_encrypt(PartyKey{2}, GroupElement{4}, toy).value, 16);
}

TEST(CommuteEncrypt, ThousandRandomTriplesCommuteAndMatchOracle) {
  const auto& d = params256();
  const cpp_int p = to_cpp(d.p);
  Rng rng(31337);
  for (int i = 0; i < 1000; ++i) {
    const auto e = hash_to_group("triple-" + std::to_string(i), d);
    const auto ka = PartyKey::random(d, rng);
    const auto kb = PartyKey::random(d, rng);
    const auto ab = commute_encrypt(kb, commute_encrypt(ka, e, d), d);
    const auto ba = commute_encrypt(ka, commute_encrypt(kb, e, d), d);
    ASSERT_EQ(ab, ba);
    const cpp_int once = oracle_powm(to_cpp(e.value), to_cpp(ka.exponent), p);
    ASSERT_EQ(to_cpp(ab.value), oracle_powm(once, to_cpp(kb.exponent), p));
    ASSERT_TRUE(in_subgroup(ab, d));
  }
}

TEST(PartyKey, RandomStaysInRange) {
  const auto toy = toy_params();
  Rng rng(1);
  std::set<long> seen;
  for (int i = 0; i < 500; ++i) {
    const auto k = PartyKey::random(toy, rng);
    EXPECT_GE(k.exponent, 2);
    EXPECT_LE(k.exponent, 10);
    seen.insert(k.exponent.get_si());
  }
  EXPECT_EQ(seen.size(), 9u);
}

}  // namespace
}  // namespace linkguard::privmatch

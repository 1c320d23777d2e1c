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

#include "linkguard/kvconfig.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "linkguard/sha256.hpp"
#include "linkguard/text.hpp"

namespace linkguard {
namespace {

TEST(KeyValueConfig, ParsesInOrderWithComments) {
  const auto cfg = KeyValueConfig::parse("# header\n b = 2 \n\na=x = y\n  # indented comment\nc = -1.5\n");
  ASSERT_EQ(cfg.entries().size(), 3u);
  EXPECT_EQ(cfg.entries()[0].first, "b");
  EXPECT_EQ(cfg.get("a"), "x = y");
  EXPECT_EQ(cfg.get_int("b"), 2);
  EXPECT_EQ(cfg.get_double("c"), -1.5);
  EXPECT_EQ(cfg.get_or("zz", "d"), "d");
  EXPECT_THROW(cfg.get("zz"), ArgumentError);
  EXPECT_THROW(cfg.get_int("a"), ArgumentError);
}

TEST(KeyValueConfig, DuplicateAndMalformedLinesNameTheLine) {
  try {
    KeyValueConfig::parse("a = 1\nb = 2\na = 3\n");
    FAIL();
  } catch (const IngestionError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(KeyValueConfig::parse("novalue\n"), IngestionError);
  EXPECT_THROW(KeyValueConfig::parse(" = 3\n"), IngestionError);
}

TEST(Text, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.0}) EXPECT_EQ(*parse_double(format_double(v)), v);
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(*parse_double("-inf"), -std::numeric_limits<double>::infinity());
  EXPECT_FALSE(parse_double("1.5x"));
  EXPECT_FALSE(parse_int("7.0"));
}

TEST(Text, CsvQuoting) {
  EXPECT_EQ(*split_csv_line("a,\"b,c\",\"d\"\"e\""), (std::vector<std::string>{"a", "b,c", "d\"e"}));
  EXPECT_FALSE(split_csv_line("a,\"b"));
  EXPECT_EQ(csv_cell("x,y"), "\"x,y\"");
  EXPECT_EQ(csv_cell("plain"), "plain");
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace linkguard

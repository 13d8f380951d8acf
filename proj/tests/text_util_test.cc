// Copyright 2026 The aigtkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "aigt/text_util.h"

#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace aigt {
namespace {

TEST(TextUtilTest, TrimAndCollapse) {
  EXPECT_EQ(trim("  a b \n"), "a b");
  EXPECT_EQ(trim(""), "");
  EXPECT_EQ(collapse_whitespace(" a \t\n b  "), "a b");
  EXPECT_EQ(split_whitespace(" x  y\tz "), (std::vector<std::string>{"x", "y", "z"}));
}

TEST(TextUtilTest, CaseInsensitiveMatching) {
  EXPECT_TRUE(contains_icase("As An AI", "as an ai"));
  EXPECT_FALSE(contains_icase("abc", "abd"));
  EXPECT_TRUE(starts_with_icase("Let me know", "let ME"));
  EXPECT_EQ(fold_for_match("I\xE2\x80\x99M"), "i'm");
}

TEST(TextUtilTest, Utf8RoundTrip) {
  const std::string s = "a\xC3\xA9\xE2\x9C\x8A\xF0\x9F\x98\x82";
  const auto cps = utf8_decode(s);
  ASSERT_EQ(cps.size(), 4u);
  EXPECT_EQ(cps[3], U'\U0001F602');
  std::string back;
  for (char32_t c : cps) back += utf8_encode(c);
  EXPECT_EQ(back, s);
}

TEST(TextUtilTest, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(TextUtilTest, UniformBelowStaysInRange) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LT(uniform_below(rng, 7), 7u);
    const double u = uniform_unit(rng);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace aigt

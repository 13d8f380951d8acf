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

#ifndef AIGT_TEXT_UTIL_H_
#define AIGT_TEXT_UTIL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace aigt {

bool is_ascii_space(char c);
bool is_ascii_word(char c);  // [A-Za-z0-9_]

std::string_view trim(std::string_view s);
std::string ascii_lower(std::string_view s);

// Lowercases ASCII and folds typographic apostrophes/quotes (U+2018, U+2019)
// to "'" so lexicon matching is insensitive to smart punctuation.
std::string fold_for_match(std::string_view s);

// Collapses every run of ASCII whitespace to one space and trims both ends.
std::string collapse_whitespace(std::string_view s);

std::vector<std::string_view> split_lines(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);

// Decodes UTF-8 leniently: invalid bytes decode to U+FFFD.
std::vector<char32_t> utf8_decode(std::string_view s);
std::string utf8_encode(char32_t cp);

bool starts_with_icase(std::string_view s, std::string_view prefix);
bool contains_icase(std::string_view haystack, std::string_view needle);

// Lowercase hex SHA-256 of the bytes of `data`.
std::string sha256_hex(std::string_view data);

// Splitmix64 finalizer; used wherever a stable, platform-independent hash of
// integers is needed.
std::uint64_t mix64(std::uint64_t x);
// FNV-1a over bytes.
std::uint64_t fnv1a64(std::string_view s);

// Unbiased draw in [0, bound) from a 64-bit engine; platform independent,
// unlike std::uniform_int_distribution.
template <typename Engine>
std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return x % bound;
}

// Uniform double in [0, 1) with 53 random bits.
template <typename Engine>
double uniform_unit(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace aigt

#endif  // AIGT_TEXT_UTIL_H_

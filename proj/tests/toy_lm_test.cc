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

#include "aigt/toy_lm.h"

#include <random>

#include "aigt/error.h"
#include "aigt/text_util.h"
#include "gtest/gtest.h"

namespace aigt {
namespace {

TEST(ToyTokenizerTest, DecodeEncodeRoundTrip) {
  ToyTokenizer tok(16);
  EXPECT_EQ(tok.id(), "toy-ws-v16");
  std::mt19937_64 rng(3);
  for (int round = 0; round < 200; ++round) {
    std::vector<int> ids(1 + rng() % 20);
    for (auto& t : ids) t = static_cast<int>(rng() % 16);
    EXPECT_EQ(tok.encode(tok.decode(ids)), ids);
  }
  EXPECT_THROW(tok.piece(16), InvalidArgument);
  EXPECT_THROW(ToyTokenizer(1), InvalidArgument);
}

TEST(ToyTokenizerTest, UnknownWordsHashIntoTheVocabulary) {
  ToyTokenizer tok(16);
  const auto ids = tok.encode("zebra quokka");
  ASSERT_EQ(ids.size(), 2u);
  for (int t : ids) {
    EXPECT_GE(t, 0);
    EXPECT_LT(t, 16);
  }
  EXPECT_EQ(tok.encode("zebra"), tok.encode("zebra"));
}

TEST(ToyLmTest, SamplingIsSeeded) {
  ToyLm lm(ToyLmConfig{12});
  std::mt19937_64 a(5);
  std::mt19937_64 b(5);
  EXPECT_EQ(lm.sample(30, a), lm.sample(30, b));
}

TEST(StaticDistributionBackendTest, ValidatesInput) {
  EXPECT_THROW(StaticDistributionBackend("s", {0.5, 0.6}), InvalidArgument);
  EXPECT_THROW(StaticDistributionBackend("s", {1.5, -0.5}), InvalidArgument);
  StaticDistributionBackend ok("s", {0.5, 0.25, 0.25});
  EXPECT_EQ(ok.next_distribution({}).size(), 3u);
}

TEST(ToyCorpusTest, PairedAndShareHumanTexts) {
  ToyCorpusSpec a{"g1", ToyLmConfig{101}, ToyLmConfig{1}, 20, 16, 48, 7};
  ToyCorpusSpec b{"g2", ToyLmConfig{101}, ToyLmConfig{2}, 20, 16, 48, 7};
  const auto ca = make_toy_corpus(a);
  const auto cb = make_toy_corpus(b);
  ASSERT_EQ(ca.size(), 40u);
  ASSERT_EQ(cb.size(), 40u);
  std::size_t humans = 0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    EXPECT_NO_THROW(validate_record(ca[i]));
    if (ca[i].label == Label::kHuman) {
      ++humans;
      EXPECT_EQ(ca[i].text, cb[i].text);
    } else {
      EXPECT_EQ(ca[i].generator, "g1");
    }
    const auto n = split_whitespace(ca[i].text).size();
    EXPECT_GE(n, 16u);
    EXPECT_LE(n, 48u);
  }
  EXPECT_EQ(humans, 20u);
  EXPECT_EQ(make_toy_corpus(a), ca);
}

TEST(ToyCorpusTest, RejectsBadSpecs) {
  ToyCorpusSpec s{"g", ToyLmConfig{1, 16}, ToyLmConfig{2, 8}, 5, 16, 48, 1};
  EXPECT_THROW(make_toy_corpus(s), InvalidArgument);
  s.generator.vocab_size = 16;
  s.min_tokens = 0;
  EXPECT_THROW(make_toy_corpus(s), InvalidArgument);
  s.min_tokens = 4;
  s.generator_name.clear();
  EXPECT_THROW(make_toy_corpus(s), InvalidArgument);
}

}  // namespace
}  // namespace aigt

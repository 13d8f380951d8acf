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

#include "aigt/lingstats.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "aigt/error.h"
#include "aigt/evalharness.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace aigt {
namespace {

FeatureVector features(std::string_view text) {
  static const HeuristicTagger tagger(builtin_lexicons());
  return extract_features(text, builtin_lexicons(), tagger);
}

TEST(Features, InventoryCoversEveryNamedFeature) {
  const auto& inv = feature_inventory();
  EXPECT_EQ(inv.size(), 41u);
  for (const char* name :
       {"ats", "links", "hashtags", "emojis", "length_chars", "offensive",
        "misspelled", "upper_lower_ratio", "pastVerbs", "1persProns", "TTR",
        "wordLength", "contractions", "thatDeletion", "analNegn", "swear_any",
        "slang_any"}) {
    EXPECT_NE(std::find(inv.begin(), inv.end(), name), inv.end()) << name;
  }
  const FeatureVector fv = features("just a plain tweet");
  for (const auto& name : inv) EXPECT_EQ(fv.values.count(name), 1u) << name;
}

TEST(Features, SurfaceCounts) {
  const FeatureVector fv = features("OMG \xF0\x9F\x98\x82\xF0\x9F\x98\x82 go @bob");
  EXPECT_DOUBLE_EQ(fv.counts.at("emojis"), 2.0);
  EXPECT_DOUBLE_EQ(fv.counts.at("ats"), 1.0);
  EXPECT_DOUBLE_EQ(fv.values.at("ats"), 1.0 / fv.n_tokens);

  const FeatureVector links = features("read https://example.com/a and #news #ai");
  EXPECT_DOUBLE_EQ(links.counts.at("links"), 1.0);
  EXPECT_DOUBLE_EQ(links.counts.at("hashtags"), 2.0);
}

TEST(Features, TypeTokenRatioAndLengths) {
  EXPECT_NEAR(features("the cat the").values.at("TTR"), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(features("The cat, the!").values.at("TTR"), 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(features("ab abcd").values.at("wordLength"), 3.0);
  EXPECT_DOUBLE_EQ(features("h\xC3\xA9llo").values.at("length_chars"), 5.0);
  EXPECT_DOUBLE_EQ(features("ABc").values.at("upper_lower_ratio"), 2.0);
  EXPECT_DOUBLE_EQ(features("ABC").values.at("upper_lower_ratio"), 3.0);
}

TEST(Features, ContractionsNeedAnApostrophe) {
  EXPECT_DOUBLE_EQ(features("I don't know").counts.at("contractions"), 1.0);
  EXPECT_DOUBLE_EQ(features("I don\xE2\x80\x99t know").counts.at("contractions"),
                   1.0);
  EXPECT_DOUBLE_EQ(features("I dont know").counts.at("contractions"), 0.0);
}

TEST(Features, PronounsAndMisspellings) {
  const FeatureVector fv = features("we told you they qwzxv");
  EXPECT_DOUBLE_EQ(fv.counts.at("1persProns"), 1.0);
  EXPECT_DOUBLE_EQ(fv.counts.at("2persProns"), 1.0);
  EXPECT_DOUBLE_EQ(fv.counts.at("3persProns"), 1.0);
  EXPECT_DOUBLE_EQ(fv.counts.at("misspelled"), 1.0);
}

TEST(Features, PretaggedInputDrivesPosFeatures) {
  std::vector<LingToken> tokens;
  std::vector<std::string> tags;
  parse_pretagged("she/PRP walked/VBD home/NN quickly/RB", tokens, tags);
  ASSERT_EQ(tokens.size(), 4u);
  EXPECT_EQ(tags[1], "VBD");
  const FeatureVector fv = extract_features_tagged(
      "she walked home quickly", tokens, tags, builtin_lexicons());
  EXPECT_DOUBLE_EQ(fv.counts.at("pastVerbs"), 1.0);
  EXPECT_DOUBLE_EQ(fv.counts.at("Nouns"), 1.0);
  EXPECT_DOUBLE_EQ(fv.counts.at("ADV"), 1.0);
}

TEST(Features, BlankTextIsInvalidAndExtractionIsPure) {
  EXPECT_THROW(features("   "), InvalidArgument);
  const std::string text = "Honestly, I can't believe it's 2024 already! #wow";
  const FeatureVector a = features(text);
  const FeatureVector b = features(text);
  EXPECT_EQ(a.values, b.values);
  for (const auto& [name, v] : a.values) {
    EXPECT_GE(v, 0.0) << name;
  }
  EXPECT_GT(a.values.at("TTR"), 0.0);
  EXPECT_LE(a.values.at("TTR"), 1.0);
}

TEST(Emoji, CodepointRanges) {
  EXPECT_TRUE(is_emoji_codepoint(0x1F602));
  EXPECT_TRUE(is_emoji_codepoint(0x2764));
  EXPECT_FALSE(is_emoji_codepoint('a'));
  EXPECT_EQ(count_emoji("a\xF0\x9F\x94\xA5 b\xF0\x9F\x94\xA5"), 2u);
}

struct FrozenMw {
  std::vector<double> a;
  std::vector<double> b;
  double u;
  double p;
};

// Reference values from scipy.stats.mannwhitneyu(b, a,
// alternative="two-sided", method="asymptotic", use_continuity=True).
TEST(MannWhitney, MatchesFrozenReferenceValues) {
  const std::vector<FrozenMw> cases = {
      {{1, 2}, {3, 4}, 4.0, 0.2452781168067728},
      {{1, 4}, {2, 3}, 2.0, 1.0},
      {{1, 2, 3, 4, 5}, {3, 4, 5, 6, 7, 8}, 25.5, 0.066015431521231},
      {{0.1, 0.2, 0.2, 0.5, 0.9, 1.3, 2.0},
       {0.2, 0.5, 0.5, 1.1, 1.7, 2.2, 2.5, 3.0},
       41.0,
       0.14510568048514996},
      {{5, 5, 5}, {5, 5, 6}, 6.0, 0.5049850750938458},
  };
  for (const auto& c : cases) {
    const MannWhitney mw = mann_whitney(c.a, c.b);
    EXPECT_DOUBLE_EQ(mw.u_b, c.u);
    EXPECT_NEAR(mw.p_value, c.p, 1e-12);
  }
}

TEST(MannWhitney, WorkedExamplesAndDegenerateCases) {
  EXPECT_DOUBLE_EQ(mann_whitney({5}, {5}).u_b, 0.5);
  EXPECT_DOUBLE_EQ(mann_whitney({5}, {5}).p_value, 1.0);
  EXPECT_THROW(mann_whitney({}, {1}), InvalidArgument);
}

TEST(RankBiserial, ExamplesAndRange) {
  EXPECT_DOUBLE_EQ(rank_biserial(4, 2, 2), 1.0);
  EXPECT_DOUBLE_EQ(rank_biserial(2, 2, 2), 0.0);
  EXPECT_DOUBLE_EQ(rank_biserial(0, 2, 2), -1.0);
  EXPECT_THROW(rank_biserial(1, 0, 2), InvalidArgument);
}

TEST(RankBiserial, PairwiseOracleAndSymmetries) {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 300; ++round) {
    const bool ties = round % 2 == 0;
    const auto a = testing::random_scores(rng, testing::random_size(rng, 1, 40),
                                          ties);
    const auto b = testing::random_scores(rng, testing::random_size(rng, 1, 40),
                                          ties, 0.7);
    const MannWhitney ab = mann_whitney(a, b);
    const MannWhitney ba = mann_whitney(b, a);
    EXPECT_EQ(ab.u_b, testing::pairwise_u_b(a, b));
    EXPECT_EQ(ab.u_b + ba.u_b, static_cast<double>(a.size() * b.size()));
    const double r = rank_biserial(ab.u_b, a.size(), b.size());
    EXPECT_EQ(r, -rank_biserial(ba.u_b, b.size(), a.size()));
    EXPECT_GE(r, -1.0);
    EXPECT_LE(r, 1.0);
    EXPECT_EQ(band(r), band(-r));
    EXPECT_GE(ab.p_value, 0.0);
    EXPECT_LE(ab.p_value, 1.0);
    // Rank statistic: a strictly increasing transform changes nothing.
    std::vector<double> ta = a;
    std::vector<double> tb = b;
    for (double& x : ta) x = std::cbrt(x) * 5.0 - 1.0;
    for (double& x : tb) x = std::cbrt(x) * 5.0 - 1.0;
    EXPECT_EQ(mann_whitney(ta, tb).u_b, ab.u_b);
    // Same count as the evaluation harness, viewed as AUROC.
    EXPECT_EQ(auroc(b, a, Orientation::kHigherIsAi),
              ab.u_b / static_cast<double>(a.size() * b.size()));
  }
}

TEST(Band, ReferenceEffectLabels) {
  EXPECT_EQ(band(0.92), EffectBand::kLarge);
  EXPECT_EQ(band(-0.47), EffectBand::kMedium);
  EXPECT_EQ(band(0.26), EffectBand::kSmall);
  EXPECT_EQ(band(0.11), EffectBand::kSmall);
  EXPECT_EQ(band(-0.07), EffectBand::kNone);
  EXPECT_EQ(band(0.05), EffectBand::kNone);
}

TEST(Band, BoundariesAndRange) {
  EXPECT_EQ(band(0.1), EffectBand::kSmall);
  EXPECT_EQ(band(0.3), EffectBand::kMedium);
  EXPECT_EQ(band(-0.5), EffectBand::kLarge);
  EXPECT_EQ(band(1.0), EffectBand::kLarge);
  EXPECT_THROW(band(1.01), InvalidArgument);
  EXPECT_THROW(band(std::nan("")), InvalidArgument);
  EXPECT_EQ(to_string(EffectBand::kMedium), "medium");
}

FeatureVector one_feature(double v) {
  FeatureVector fv;
  fv.values["x"] = v;
  return fv;
}

TEST(CompareCorpora, DominanceIdentityAndKnownFraction) {
  std::vector<FeatureVector> human;
  std::vector<FeatureVector> ai;
  for (int i = 0; i < 5; ++i) human.push_back(one_feature(i));
  for (int i = 0; i < 5; ++i) ai.push_back(one_feature(10 + i));
  EffectSizeReport dom = compare_corpora(human, ai, {"x"});
  EXPECT_DOUBLE_EQ(dom.rows[0].r, 1.0);
  EXPECT_EQ(dom.rows[0].band, EffectBand::kLarge);

  EffectSizeReport same = compare_corpora(human, human, {"x"});
  EXPECT_DOUBLE_EQ(same.rows[0].r, 0.0);
  EXPECT_EQ(same.rows[0].band, EffectBand::kNone);

  // Human values 0..9, AI values at k + 0.5 beat exactly k+1 of 10 each.
  std::mt19937_64 rng(4);
  for (int round = 0; round < 100; ++round) {
    std::vector<FeatureVector> h;
    for (int i = 0; i < 10; ++i) h.push_back(one_feature(i));
    std::vector<FeatureVector> a;
    double wins = 0.0;
    const std::size_t n_ai = testing::random_size(rng, 1, 12);
    for (std::size_t j = 0; j < n_ai; ++j) {
      const int k = static_cast<int>(uniform_below(rng, 11)) - 1;
      a.push_back(one_feature(k + 0.5));
      wins += k + 1;
    }
    const double f = wins / (10.0 * static_cast<double>(n_ai));
    const EffectSizeReport rep = compare_corpora(h, a, {"x"});
    EXPECT_NEAR(rep.rows[0].r, 2.0 * f - 1.0, 1e-12);
  }
}

TEST(CompareCorpora, ErrorsAndMetadata) {
  const std::vector<FeatureVector> g = {one_feature(1)};
  EXPECT_THROW(compare_corpora({}, g, {"x"}), InvalidArgument);
  EXPECT_THROW(compare_corpora(g, g, {"missing"}), InvalidArgument);
  const EffectSizeReport rep = compare_corpora(g, g, {"x"});
  EXPECT_EQ(rep.metadata["normalization"], "per_token");
  const std::string csv = to_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "feature,mean_human,mean_ai,U,R,p,band");
  EXPECT_NE(to_markdown(rep).find("| x |"), std::string::npos);
}

TEST(CorpusFeatures, ParallelMatchesSerialAndUsesPosMeta) {
  std::vector<TextRecord> records;
  for (int i = 0; i < 12; ++i) {
    records.push_back(testing::human(std::to_string(i),
                                     "we went there at " + std::to_string(i) +
                                         " and it's fine #ok"));
  }
  records[0].meta["pos"] = "we/PRP went/VBD";
  const HeuristicTagger tagger(builtin_lexicons());
  const auto serial = extract_corpus_features(records, builtin_lexicons(), tagger, 1);
  const auto parallel = extract_corpus_features(records, builtin_lexicons(), tagger, 4);
  ASSERT_EQ(serial.size(), parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].values, parallel[i].values);
    EXPECT_EQ(serial[i].record_id, records[i].id);
  }
  EXPECT_DOUBLE_EQ(serial[0].counts.at("pastVerbs"), 1.0);
}

}  // namespace
}  // namespace aigt

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

#include "aigt/corpus.h"

#include <algorithm>
#include <filesystem>
#include <random>
#include <set>
#include <sstream>

#include "aigt/error.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace aigt {
namespace {

using testing::ai;
using testing::human;

std::vector<TextRecord> read_string(const std::string& s) {
  std::istringstream in(s);
  return read_corpus(in);
}

TEST(LoadCorpusTest, TwoValidLinesKeepOrder) {
  const auto records = read_string(
      R"({"id":"b","text":"second","label":"human","topic":"x","pair_id":"p2"})"
      "\n"
      R"({"id":"a","text":"first","label":"human","topic":"x","pair_id":"p1"})"
      "\n");
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].id, "b");
  EXPECT_EQ(records[1].id, "a");
}

TEST(LoadCorpusTest, MissingTextNamesLineOne) {
  try {
    read_string(R"({"id":"a","label":"human","topic":"x","pair_id":"p"})" "\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
}

TEST(LoadCorpusTest, MalformedJsonNamesLine) {
  try {
    read_string(
        R"({"id":"a","text":"t","label":"human","topic":"x","pair_id":"p"})"
        "\n{not json\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(LoadCorpusTest, DuplicateIdRejected) {
  EXPECT_THROW(
      read_string(
          R"({"id":"a","text":"t","label":"human","topic":"x","pair_id":"p"})"
          "\n"
          R"({"id":"a","text":"u","label":"human","topic":"x","pair_id":"q"})"
          "\n"),
      ParseError);
}

TEST(LoadCorpusTest, HumanRecordWithGeneratorRejected) {
  EXPECT_THROW(
      read_string(R"({"id":"a","text":"t","label":"human","topic":"x",)"
                  R"("pair_id":"p","generator":"gpt-4o"})"
                  "\n"),
      ParseError);
}

TEST(LoadCorpusTest, BlankTextRejected) {
  EXPECT_THROW(
      read_string(R"({"id":"a","text":"   ","label":"human","topic":"x","pair_id":"p"})"
                  "\n"),
      ParseError);
}

TEST(LoadCorpusTest, BalancedFileOfBenchmarkSize) {
  std::vector<TextRecord> records;
  for (int i = 0; i < 7203; ++i) {
    const std::string p = "p" + std::to_string(i);
    records.push_back(human(p, "human text " + p));
    records.push_back(ai(p, "ai text " + p));
  }
  std::ostringstream out;
  write_corpus(out, records);
  const auto loaded = read_string(out.str());
  ASSERT_EQ(loaded.size(), 14406u);
  std::size_t humans = 0;
  for (const auto& r : loaded) humans += r.label == Label::kHuman;
  EXPECT_EQ(humans, 7203u);
  EXPECT_EQ(loaded.size() - humans, 7203u);
}

TEST(LoadCorpusTest, SaveLoadIsIdentity) {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 50; ++round) {
    std::vector<TextRecord> records;
    const std::size_t n = testing::random_size(rng, 1, 8);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string p = "p" + std::to_string(i);
      TextRecord h = human(p, "caf\xC3\xA9 \"quoted\" \\ line\twith tab " + p);
      if (uniform_below(rng, 2)) h.meta["source"] = "s" + std::to_string(i);
      records.push_back(h);
      TextRecord a = ai(p, "emoji \xF0\x9F\x98\x82 " + p);
      if (uniform_below(rng, 2)) {
        a.strategy = Strategy::kGen10;
        a.gen_index = static_cast<int>(1 + uniform_below(rng, 10));
      }
      records.push_back(a);
    }
    testing::TempDir dir;
    save_corpus(dir / "c.jsonl", records);
    EXPECT_EQ(load_corpus(dir / "c.jsonl"), records);
  }
}

TEST(StripEntitiesTest, WorkedExamples) {
  EXPECT_EQ(strip_entities("@Noin007 though I'm not a girl"),
            "though I'm not a girl");
  EXPECT_EQ(strip_entities("no entities here"), "no entities here");
  EXPECT_EQ(strip_entities("see https://t.co/abc now @bob!"), "see now !");
}

TEST(StripEntitiesTest, BareShortLinkAndSchemes) {
  EXPECT_EQ(strip_entities("look t.co/xyz here"), "look here");
  EXPECT_EQ(strip_entities("HTTP://Example.com/a?b=c done"), "done");
  EXPECT_EQ(strip_entities("a   b\n\nc"), "a b c");
}

TEST(StripEntitiesTest, IdempotentOnRandomStrings) {
  const std::vector<std::string> parts = {"@a", "@_x1", "http://u.v/w", "t.co/q",
                                          "word", "!", " ", "  ", "\t", "@",
                                          "https://", "x@y", "#tag", "\xC3\xA9"};
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const std::size_t n = testing::random_size(rng, 0, 10);
    for (std::size_t k = 0; k < n; ++k) {
      s += parts[uniform_below(rng, parts.size())];
      if (uniform_below(rng, 2)) s += ' ';
    }
    const std::string once = strip_entities(s);
    EXPECT_EQ(strip_entities(once), once) << "input: " << s;
  }
}

TEST(RefusalFilterTest, WorkedExamples) {
  const auto lex = default_refusal_lexicon();
  EXPECT_TRUE(is_refusal("As an AI assistant, I don't have personal opinions", lex));
  EXPECT_FALSE(is_refusal("Climate action now!", lex));
  EXPECT_TRUE(is_refusal("I\xE2\x80\x99m sorry, but I can't do that", lex));

  std::vector<TextRecord> records = {
      human("p1", "h1"), ai("p1", "Climate action now!"),
      human("p2", "h2"), ai("p2", "As an AI assistant, I don't have personal opinions"),
      human("p3", "h3"), ai("p3", "vote"),
  };
  const auto result = filter_refusals(records, lex);
  EXPECT_EQ(result.kept.size(), 4u);
  EXPECT_EQ(result.dropped_pair_ids, std::vector<std::string>{"p2"});
  for (const auto& r : result.kept) EXPECT_NE(r.pair_id, "p2");
}

TEST(RefusalFilterTest, NeverOrphansAHumanRecord) {
  std::mt19937_64 rng(17);
  const auto lex = default_refusal_lexicon();
  for (int round = 0; round < 200; ++round) {
    std::vector<TextRecord> records;
    const std::size_t n = testing::random_size(rng, 1, 12);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string p = "p" + std::to_string(i);
      records.push_back(human(p, "h"));
      const std::size_t k = testing::random_size(rng, 1, 3);
      for (std::size_t j = 0; j < k; ++j) {
        records.push_back(ai(p, uniform_below(rng, 4) == 0 ? "I cannot help" : "ok",
                             "t", "a-" + p + "-" + std::to_string(j)));
      }
    }
    const auto result = filter_refusals(records, lex);
    std::set<std::string> human_pairs;
    std::set<std::string> ai_pairs;
    for (const auto& r : result.kept) {
      (r.label == Label::kHuman ? human_pairs : ai_pairs).insert(r.pair_id);
      if (r.label == Label::kAi) EXPECT_FALSE(is_refusal(r.text, lex));
    }
    EXPECT_EQ(human_pairs, ai_pairs);
    EXPECT_EQ(filter_refusals(result.kept, lex).kept, result.kept);
  }
}

TEST(StripScaffoldingTest, WorkedExamples) {
  EXPECT_EQ(strip_scaffolding("Sure! Here is your tweet:\n\"Vote today!\""),
            "Vote today!");
  EXPECT_EQ(strip_scaffolding("Vote today!"), "Vote today!");
  EXPECT_EQ(strip_scaffolding(
                "Go vote.\nLet me know if there is anything else I can help "
                "you with!"),
            "Go vote.");
}

TEST(StripScaffoldingTest, KeepsListIntroductionWithoutCue) {
  const std::string t = "Three reasons to vote:\n1. voice\n2. duty";
  EXPECT_EQ(strip_scaffolding(t), t);
}

TEST(StripScaffoldingTest, Idempotent) {
  const std::vector<std::string> parts = {
      "Sure! Here is your tweet:", "Here's a post:", "\"", "'", "body text",
      "Let me know if you need more!", "\n", " ", "Certainly:", "a: b"};
  std::mt19937_64 rng(23);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const std::size_t n = testing::random_size(rng, 0, 7);
    for (std::size_t k = 0; k < n; ++k) s += parts[uniform_below(rng, parts.size())];
    const std::string once = strip_scaffolding(s);
    EXPECT_EQ(strip_scaffolding(once), once) << "input: " << s;
  }
}

TEST(TagFilterTest, WorkedExamples) {
  const std::vector<TagCondition> conds = {{"Feminism", {"#feminism"}}};
  const std::vector<TextRecord> dropped = {
      human("p", "Proud to march! #Feminism", "Feminism"),
      ai("p", "So proud of everyone marching", "Feminism")};
  EXPECT_TRUE(pairwise_tag_filter(dropped, conds).empty());

  const std::vector<TextRecord> kept = {
      human("p", "Proud to march! #Feminism", "Feminism"),
      ai("p", "Marching proud #feminism \xE2\x9C\x8A", "Feminism")};
  EXPECT_EQ(pairwise_tag_filter(kept, conds), kept);

  const std::vector<TextRecord> vacuous = {
      human("p", "Nothing tagged", "Feminism"), ai("p", "anything", "Feminism")};
  EXPECT_EQ(pairwise_tag_filter(vacuous, conds), vacuous);
}

TEST(TagFilterTest, ConjunctivePatterns) {
  EXPECT_TRUE(pattern_matches("the NSA is spying on us", "NSA & spying"));
  EXPECT_FALSE(pattern_matches("the NSA is here", "NSA & spying"));
  EXPECT_TRUE(pattern_matches("REFUGEES ARE welcome", "refugees are"));
}

TEST(TagFilterTest, BalancedAndIdempotent) {
  const auto conds = default_tag_conditions();
  const std::vector<std::string> topics = {"Feminism", "Abortion", "Climate Change"};
  const std::vector<std::string> snippets = {"#Feminism", "#Abortion", "#ClimateChange",
                                             "plain", "#prolife", "words"};
  std::mt19937_64 rng(29);
  for (int round = 0; round < 300; ++round) {
    std::vector<TextRecord> records;
    const std::size_t n = testing::random_size(rng, 1, 10);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string p = "p" + std::to_string(i);
      const std::string topic = topics[uniform_below(rng, topics.size())];
      records.push_back(human(p, "h " + snippets[uniform_below(rng, snippets.size())], topic));
      records.push_back(ai(p, "a " + snippets[uniform_below(rng, snippets.size())], topic));
    }
    const auto once = pairwise_tag_filter(records, conds);
    std::size_t h = 0;
    for (const auto& r : once) h += r.label == Label::kHuman;
    EXPECT_EQ(2 * h, once.size());
    EXPECT_EQ(pairwise_tag_filter(once, conds), once);
  }
}

TEST(SplitDatasetTest, TrainTestProtocol) {
  std::vector<TextRecord> records;
  for (int i = 0; i < 7203; ++i) {
    const std::string p = "p" + std::to_string(i);
    records.push_back(human(p, "h"));
    records.push_back(ai(p, "a"));
  }
  const Split s = split_dataset(records, {6000, 3});
  std::size_t train_h = 0, test_h = 0;
  for (const auto& r : s.train) train_h += r.label == Label::kHuman;
  for (const auto& r : s.test) test_h += r.label == Label::kHuman;
  EXPECT_EQ(train_h, 6000u);
  EXPECT_EQ(s.train.size(), 12000u);
  EXPECT_EQ(test_h, 1203u);
  EXPECT_EQ(s.test.size(), 2406u);
}

TEST(SplitDatasetTest, BoundaryAndErrors) {
  std::vector<TextRecord> records;
  for (int i = 0; i < 10; ++i) {
    const std::string p = "p" + std::to_string(i);
    records.push_back(human(p, "h"));
    records.push_back(ai(p, "a"));
  }
  EXPECT_TRUE(split_dataset(records, {10, 1}).test.empty());
  EXPECT_THROW(split_dataset(records, {11, 1}), InvalidArgument);
  EXPECT_THROW(split_dataset(records, {0, 1}), InvalidArgument);
}

TEST(SplitDatasetTest, FallbackHintInError) {
  std::vector<TextRecord> records;
  for (int i = 0; i < 3500; ++i) {
    const std::string p = "p" + std::to_string(i);
    records.push_back(human(p, "h"));
    records.push_back(ai(p, "a"));
  }
  try {
    split_dataset(records, {6000, 1});
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("3000"), std::string::npos);
  }
}

TEST(SplitDatasetTest, PartitionAndDeterminism) {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 100; ++round) {
    std::vector<TextRecord> records;
    const std::size_t n = testing::random_size(rng, 1, 30);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string p = "p" + std::to_string(i);
      records.push_back(human(p, "h"));
      records.push_back(ai(p, "a"));
    }
    const SplitSpec spec{testing::random_size(rng, 1, n), rng()};
    const Split a = split_dataset(records, spec);
    const Split b = split_dataset(records, spec);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.test, b.test);
    std::set<std::string> train_pairs, test_pairs, ids;
    for (const auto& r : a.train) train_pairs.insert(r.pair_id), ids.insert(r.id);
    for (const auto& r : a.test) test_pairs.insert(r.pair_id), ids.insert(r.id);
    for (const auto& p : train_pairs) EXPECT_FALSE(test_pairs.contains(p));
    EXPECT_EQ(ids.size(), records.size());
    EXPECT_EQ(train_pairs.size(), spec.train_per_class);
  }
}

TEST(IngestTest, SummaryListsRefusalAndTagDropsSeparately) {
  std::vector<TextRecord> records = {
      human("p1", "Proud! #Feminism", "Feminism"),
      ai("p1", "no tag here", "Feminism"),
      human("p2", "hello", "Feminism"),
      ai("p2", "As an AI, I cannot", "Feminism"),
      human("p3", "fine", "Feminism"),
      ai("p3", "Sure! Here is your tweet:\n\"fine too @x\"", "Feminism"),
  };
  IngestOptions opts;
  opts.refusal_lexicon = default_refusal_lexicon();
  opts.tag_conditions = default_tag_conditions();
  const IngestResult r = ingest(records, opts);
  EXPECT_EQ(r.summary.refusal_pairs, std::vector<std::string>{"p2"});
  EXPECT_EQ(r.summary.tag_pairs, std::vector<std::string>{"p1"});
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[1].text, "fine too");
  EXPECT_EQ(r.summary.scaffolding_modified, 1u);

  const IngestResult again = ingest(r.records, opts);
  EXPECT_EQ(again.records, r.records);
}

TEST(IngestTest, CleanCorpusRoundTripsLosslessly) {
  std::vector<TextRecord> records = {human("p1", "just words"),
                                     ai("p1", "other words")};
  const IngestResult r = ingest(records, IngestOptions{});
  EXPECT_EQ(r.records, records);
  EXPECT_EQ(r.summary.output_records, 2u);
}

TEST(IngestTest, UnpairedHumansDropped) {
  std::vector<TextRecord> records = {human("p1", "a"), ai("p1", "b"),
                                     human("p2", "lonely")};
  const IngestResult r = ingest(records, IngestOptions{});
  EXPECT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.summary.unpaired_dropped, 1u);
}

TEST(CondenseGen10Test, KeepsOneAiRecordPerPair) {
  std::vector<TextRecord> records = {human("p", "h")};
  for (int k = 1; k <= 10; ++k) {
    TextRecord a = ai("p", "v" + std::to_string(k), "t", "a" + std::to_string(k));
    a.strategy = Strategy::kGen10;
    a.gen_index = k;
    records.push_back(a);
  }
  const auto out = condense_gen10(records);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[1].gen_index, 1);
}

std::vector<std::string> sorted_lines(const std::vector<TextRecord>& records) {
  std::vector<std::string> lines;
  for (const auto& r : records) lines.push_back(to_json(r).dump());
  std::sort(lines.begin(), lines.end());
  return lines;
}

IngestOptions all_filters() {
  IngestOptions opts;
  opts.refusal_lexicon = default_refusal_lexicon();
  opts.tag_conditions = default_tag_conditions();
  return opts;
}

TEST(IngestFixtureTest, MatchesHandComputedCorpusAndIsIdempotent) {
  const std::filesystem::path dir =
      std::filesystem::path(AIGT_TEST_DATA_DIR) / "fixtures";
  const auto input = load_corpus(dir / "ingest_input.jsonl");
  const auto expected = load_corpus(dir / "ingest_expected.jsonl");
  const IngestResult first = ingest(input, all_filters());
  EXPECT_EQ(sorted_lines(first.records), sorted_lines(expected));
  EXPECT_EQ(first.summary.refusal_pairs.size(), 20u);
  EXPECT_EQ(first.summary.tag_pairs.size(), 20u);
  EXPECT_EQ(first.summary.empty_text_pairs.size(), 10u);
  EXPECT_EQ(first.summary.unpaired_dropped, 3u);

  const IngestResult second = ingest(first.records, all_filters());
  EXPECT_EQ(second.records, first.records);
  EXPECT_EQ(second.summary.entities_modified, 0u);
  EXPECT_EQ(second.summary.scaffolding_modified, 0u);
}

}  // namespace
}  // namespace aigt

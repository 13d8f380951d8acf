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

#ifndef AIGT_CORPUS_H_
#define AIGT_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace aigt {

enum class Label { kHuman, kAi };
enum class Strategy { kPara1, kPara2, kPara3, kGen10, kTopic };

std::string_view to_string(Label label);
std::string_view to_string(Strategy strategy);
Label parse_label(std::string_view s);
Strategy parse_strategy(std::string_view s);

// One social-media post with provenance. Human and AI records that belong
// together share `pair_id`.
struct TextRecord {
  std::string id;
  std::string text;
  Label label = Label::kHuman;
  std::string topic;
  std::optional<std::string> generator;
  std::optional<Strategy> strategy;
  std::string pair_id;
  std::optional<int> gen_index;  // 1..10 within a generate-10 list
  std::map<std::string, std::string> meta;

  bool operator==(const TextRecord&) const = default;
};

// Throws InvalidArgument when a single record breaks its invariants.
void validate_record(const TextRecord& record);

nlohmann::json to_json(const TextRecord& record);
TextRecord record_from_json(const nlohmann::json& j);

// JSONL reader/writer. Reading validates every record, rejects duplicate ids
// and reports the offending 1-based line number.
std::vector<TextRecord> read_corpus(std::istream& in);
std::vector<TextRecord> load_corpus(const std::filesystem::path& path);
void write_corpus(std::ostream& out, const std::vector<TextRecord>& records);
void save_corpus(const std::filesystem::path& path,
                 const std::vector<TextRecord>& records);

// A human record and the AI records generated from it.
struct PairGroup {
  std::string pair_id;
  std::optional<std::size_t> human;  // index into the record list
  std::vector<std::size_t> ai;
};

// Groups records by pair_id in order of first appearance. Throws
// InvalidArgument when a pair has more than one human record or when an AI
// record has no human partner.
std::vector<PairGroup> group_pairs(const std::vector<TextRecord>& records);

// ---------------------------------------------------------------------------
// Text post-processing

// Removes @-mentions ("@" + [A-Za-z0-9_]+), scheme URLs ("http://" or
// "https://" up to the next whitespace) and bare "t.co/..." tokens, then
// collapses whitespace. Idempotent.
std::string strip_entities(std::string_view text);

// Removes chatbot pre-/post-scripts: a leading introduction line ending in a
// colon ("Sure! Here is your tweet:"), a trailing line starting with
// "Let me know", and quotes wrapping the whole remaining body. Applied to a
// fixed point, so idempotent.
std::string strip_scaffolding(std::string_view text);

// ---------------------------------------------------------------------------
// Filtering

std::vector<std::string> default_refusal_lexicon();
std::vector<std::string> load_phrase_list(const std::filesystem::path& path);

bool is_refusal(std::string_view text, const std::vector<std::string>& lexicon);

struct RefusalFilterResult {
  std::vector<TextRecord> kept;
  std::vector<std::string> dropped_pair_ids;
};

// Drops every pair in which any AI text contains a refusal phrase
// (case-insensitive). Both sides of the pair go.
RefusalFilterResult filter_refusals(const std::vector<TextRecord>& records,
                                    const std::vector<std::string>& lexicon);

// Collection criteria for one topic. A pattern containing " & " is a
// conjunction: every part must occur.
struct TagCondition {
  std::string topic;
  std::vector<std::string> patterns;
};

bool pattern_matches(std::string_view text, std::string_view pattern);

std::vector<TagCondition> default_tag_conditions();
std::vector<TagCondition> tag_conditions_from_json(const nlohmann::json& j);
std::vector<TagCondition> load_tag_conditions(
    const std::filesystem::path& path);

// Every pattern of the pair's topic that the human text satisfies must also
// be satisfied by each AI text, else the whole pair is removed.
std::vector<TextRecord> pairwise_tag_filter(
    const std::vector<TextRecord>& records,
    const std::vector<TagCondition>& conditions);

// Variant that also reports which pairs were removed.
std::vector<TextRecord> pairwise_tag_filter(
    const std::vector<TextRecord>& records,
    const std::vector<TagCondition>& conditions,
    std::vector<std::string>* dropped_pair_ids);

// Keeps only the first extraction (lowest gen_index) of each generate-10
// list so every pair is 1:1.
std::vector<TextRecord> condense_gen10(const std::vector<TextRecord>& records);

// ---------------------------------------------------------------------------
// Splitting

struct SplitSpec {
  std::size_t train_per_class = 6000;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kFallbackTrainPerClass = 3000;

struct Split {
  std::vector<TextRecord> train;
  std::vector<TextRecord> test;
};

// Samples train_per_class complete pairs without replacement; the rest is
// test. Records keep their input order inside each side. Requires every pair
// to be exactly one human + one AI record.
Split split_dataset(const std::vector<TextRecord>& records,
                    const SplitSpec& spec);

// ---------------------------------------------------------------------------
// Ingest pipeline

struct IngestOptions {
  bool strip_scaffolding = true;  // AI texts only
  bool strip_entities = true;     // both classes
  bool condense_gen10 = false;
  bool drop_unpaired = true;      // human records with no AI partner
  std::optional<std::vector<std::string>> refusal_lexicon;  // nullopt: off
  std::optional<std::vector<TagCondition>> tag_conditions;  // nullopt: off
};

struct IngestSummary {
  std::size_t input_records = 0;
  std::size_t output_records = 0;
  std::size_t unpaired_dropped = 0;            // records
  std::vector<std::string> refusal_pairs;      // pair ids
  std::vector<std::string> tag_pairs;          // pair ids
  std::vector<std::string> empty_text_pairs;   // pair ids emptied by stripping
  std::size_t scaffolding_modified = 0;        // AI texts changed
  std::size_t entities_modified = 0;           // texts changed

  nlohmann::json to_json() const;
};

struct IngestResult {
  std::vector<TextRecord> records;
  IngestSummary summary;
};

// scaffolding strip -> refusal filter -> tag filter -> entity strip.
// Tag conditions are checked on the raw text, before mentions and links are
// removed.
IngestResult ingest(const std::vector<TextRecord>& records,
                    const IngestOptions& options);

}  // namespace aigt

#endif  // AIGT_CORPUS_H_

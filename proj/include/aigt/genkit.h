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

#ifndef AIGT_GENKIT_H_
#define AIGT_GENKIT_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aigt/chat_client.h"
#include "aigt/corpus.h"
#include "aigt/error.h"
#include "json.hpp"

namespace aigt {

inline constexpr std::string_view kSocialStyleSystemPrompt =
    "You are an assistant to help write text in a casual social media style.";

// Completion-style prompts. All throw InvalidArgument on empty input.
std::string build_paraphrase_prompt(std::string_view text);
std::string build_gen10_prompt(std::string_view text);
std::string build_topic_extraction_prompt(std::string_view text);

// [system, user] pair asking for a tweet that expresses `topic_description`.
std::vector<ChatMessage> build_topic_generation_messages(
    std::string_view topic_description);

// [system, user, assistant] fine-tuning example.
std::vector<ChatMessage> build_finetune_record(std::string_view topic,
                                               std::string_view tweet);

enum class PromptKind {
  kParaphrase,
  kGen10,
  kTopicExtract,
  kTopicGenerate,
  kFinetuneRecord
};

struct PromptSpec {
  PromptKind kind = PromptKind::kParaphrase;
  std::string input_text;
  std::optional<std::string> topic_description;
  std::optional<int> iteration;  // 1..3, paraphrase only
};

using BuiltPrompt = std::variant<std::string, std::vector<ChatMessage>>;

// Dispatches on spec.kind after checking the per-kind requirements.
BuiltPrompt build_prompt(const PromptSpec& spec);

// One line of the fine-tuning training file: {"messages": [...]}.
nlohmann::json finetune_record_json(const std::vector<ChatMessage>& messages);
void write_finetune_jsonl(
    std::ostream& out,
    const std::vector<std::pair<std::string, std::string>>& topic_tweet_pairs);

// Raised when a generate-10 reply holds no parsable list.
class PostListError : public InvalidArgument {
 public:
  PostListError(const std::string& what, std::string raw)
      : InvalidArgument(what), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

// Parses a Python-style list of quoted strings out of a model reply.
// Tolerates code fences, a preamble, either quote style and backslash
// escapes. Returns at most `expected` non-empty items, each passed through
// strip_scaffolding.
std::vector<std::string> extract_post_list(std::string_view raw_model_output,
                                           std::size_t expected);

enum class CampaignStrategy { kParaphrase, kGen10, kTopic };

CampaignStrategy parse_campaign_strategy(std::string_view s);

struct CampaignOptions {
  CampaignStrategy strategy = CampaignStrategy::kParaphrase;
  int iterations = 3;        // paraphrase chain length, 1..3
  std::string generator;     // stored on every emitted record
  GenerationOptions generation;
  std::size_t max_parallel = 1;
  RetryPolicy retry{3, 0};   // per client call
  std::size_t gen10_expected = 10;
};

struct CampaignFailure {
  std::string pair_id;
  std::string stage;  // "para2", "gen10-parse", "topic-extract", ...
  std::string reason;
};

struct CampaignResult {
  std::vector<TextRecord> records;  // AI records, in input order
  std::vector<CampaignFailure> failures;
};

// Generates AI counterparts for each human record. A failed call (after
// retries) or an unparsable list skips that record; the failure is
// reported, never retried further.
CampaignResult run_generation_campaign(const std::vector<TextRecord>& records,
                                       ChatClient& client,
                                       const CampaignOptions& options);

// The first-stage prompt for every record, without calling anything.
std::vector<std::string> plan_campaign_prompts(
    const std::vector<TextRecord>& records, CampaignStrategy strategy);

}  // namespace aigt

#endif  // AIGT_GENKIT_H_

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

#include "aigt/genkit.h"

#include <chrono>
#include <ostream>
#include <thread>

#include "aigt/error.h"
#include "aigt/parallel.h"
#include "aigt/text_util.h"

namespace aigt {

namespace {

void require_non_empty(std::string_view value, const char* what) {
  if (trim(value).empty()) {
    throw InvalidArgument(std::string(what) + " must not be empty");
  }
}

}  // namespace

std::string build_paraphrase_prompt(std::string_view text) {
  require_non_empty(text, "paraphrase input");
  std::string p =
      "Task: Generate the text similar to the input social media text but "
      "using different words and sentence composition.\nInput: ";
  p.append(text);
  p.append("\nOutput: ");
  return p;
}

std::string build_gen10_prompt(std::string_view text) {
  require_non_empty(text, "generate-10 input");
  std::string p =
      "Task: Given the input social media text, generate 10 other posts that "
      "communicate the same information, but using different words and "
      "sentence composition. Output the 10 posts in a Python list format, "
      "with no additional text.\nInput: ";
  p.append(text);
  p.append("\nOutput: ");
  return p;
}

std::string build_topic_extraction_prompt(std::string_view text) {
  require_non_empty(text, "topic extraction input");
  std::string p =
      "What is the main topic of this tweet, and what stance does the author "
      "take? Answer as concisely as possible. ";
  p.append(text);
  return p;
}

namespace {

std::string topic_user_message(std::string_view topic_description) {
  std::string u =
      "Write a tweet in casual, social media style based on the following "
      "description: ";
  u.append(topic_description);
  // Descriptions extracted by a model usually end in a period already.
  if (u.back() != '.') u.push_back('.');
  return u;
}

}  // namespace

std::vector<ChatMessage> build_topic_generation_messages(
    std::string_view topic_description) {
  require_non_empty(topic_description, "topic description");
  return {{Role::kSystem, std::string(kSocialStyleSystemPrompt)},
          {Role::kUser, topic_user_message(topic_description)}};
}

std::vector<ChatMessage> build_finetune_record(std::string_view topic,
                                               std::string_view tweet) {
  require_non_empty(topic, "fine-tune topic");
  require_non_empty(tweet, "fine-tune tweet");
  return {{Role::kSystem, std::string(kSocialStyleSystemPrompt)},
          {Role::kUser, topic_user_message(topic)},
          {Role::kAssistant, std::string(tweet)}};
}

BuiltPrompt build_prompt(const PromptSpec& spec) {
  switch (spec.kind) {
    case PromptKind::kParaphrase:
      if (!spec.iteration || *spec.iteration < 1 || *spec.iteration > 3) {
        throw InvalidArgument("paraphrase prompt needs iteration in 1..3");
      }
      return build_paraphrase_prompt(spec.input_text);
    case PromptKind::kGen10:
      return build_gen10_prompt(spec.input_text);
    case PromptKind::kTopicExtract:
      return build_topic_extraction_prompt(spec.input_text);
    case PromptKind::kTopicGenerate:
      if (!spec.topic_description) {
        throw InvalidArgument("topic generation needs topic_description");
      }
      return build_topic_generation_messages(*spec.topic_description);
    case PromptKind::kFinetuneRecord:
      if (!spec.topic_description) {
        throw InvalidArgument("fine-tune record needs topic_description");
      }
      return build_finetune_record(*spec.topic_description, spec.input_text);
  }
  throw InvalidArgument("unknown prompt kind");
}

nlohmann::json finetune_record_json(const std::vector<ChatMessage>& messages) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) {
    nlohmann::json one;
    one["role"] = to_string(m.role);
    one["content"] = m.content;
    msgs.push_back(std::move(one));
  }
  nlohmann::json j;
  j["messages"] = std::move(msgs);
  return j;
}

void write_finetune_jsonl(
    std::ostream& out,
    const std::vector<std::pair<std::string, std::string>>& topic_tweet_pairs) {
  for (const auto& [topic, tweet] : topic_tweet_pairs) {
    out << finetune_record_json(build_finetune_record(topic, tweet)).dump()
        << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::string_view kLeftDoubleQuote = "\xE2\x80\x9C";
constexpr std::string_view kRightDoubleQuote = "\xE2\x80\x9D";

void skip_space(std::string_view s, std::size_t& i) {
  while (i < s.size() && is_ascii_space(s[i])) ++i;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

// Reads one quoted item starting at s[i]; advances i past the closing quote.
std::optional<std::string> read_quoted(std::string_view s, std::size_t& i) {
  if (s.substr(i).starts_with(kLeftDoubleQuote)) {
    const std::size_t start = i + kLeftDoubleQuote.size();
    const std::size_t end = s.find(kRightDoubleQuote, start);
    if (end == std::string_view::npos) return std::nullopt;
    i = end + kRightDoubleQuote.size();
    return std::string(s.substr(start, end - start));
  }
  const char quote = s[i];
  if (quote != '"' && quote != '\'') return std::nullopt;
  std::string out;
  for (std::size_t j = i + 1; j < s.size(); ++j) {
    const char c = s[j];
    if (c == quote) {
      i = j + 1;
      return out;
    }
    if (c != '\\' || j + 1 >= s.size()) {
      out.push_back(c);
      continue;
    }
    const char e = s[++j];
    switch (e) {
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case 'u':
        if (j + 4 < s.size()) {
          char32_t cp = 0;
          bool ok = true;
          for (int k = 1; k <= 4; ++k) {
            const int v = hex_value(s[j + k]);
            if (v < 0) ok = false;
            cp = (cp << 4) | static_cast<char32_t>(std::max(v, 0));
          }
          if (ok) {
            out += utf8_encode(cp);
            j += 4;
            break;
          }
        }
        out.push_back('\\');
        out.push_back(e);
        break;
      default:
        out.push_back(e);  // \\ \" \' and unknown escapes keep the char
    }
  }
  return std::nullopt;
}

std::optional<std::vector<std::string>> parse_list_at(std::string_view s,
                                                      std::size_t i) {
  ++i;  // '['
  std::vector<std::string> items;
  for (;;) {
    skip_space(s, i);
    if (i >= s.size()) return std::nullopt;
    if (s[i] == ']') return items;
    auto item = read_quoted(s, i);
    if (!item) return std::nullopt;
    items.push_back(std::move(*item));
    skip_space(s, i);
    if (i >= s.size()) return std::nullopt;
    if (s[i] == ',') {
      ++i;
      continue;
    }
    if (s[i] == ']') return items;
    return std::nullopt;
  }
}

}  // namespace

std::vector<std::string> extract_post_list(std::string_view raw,
                                           std::size_t expected) {
  for (std::size_t pos = raw.find('['); pos != std::string_view::npos;
       pos = raw.find('[', pos + 1)) {
    auto parsed = parse_list_at(raw, pos);
    if (!parsed) continue;
    std::vector<std::string> items;
    for (auto& item : *parsed) {
      if (items.size() >= expected) break;
      std::string cleaned = strip_scaffolding(item);
      if (!cleaned.empty()) items.push_back(std::move(cleaned));
    }
    if (items.empty()) {
      throw PostListError("post list contains no items", std::string(raw));
    }
    return items;
  }
  throw PostListError("no parsable post list in model output",
                      std::string(raw));
}

CampaignStrategy parse_campaign_strategy(std::string_view s) {
  if (s == "paraphrase") return CampaignStrategy::kParaphrase;
  if (s == "gen10") return CampaignStrategy::kGen10;
  if (s == "topic") return CampaignStrategy::kTopic;
  throw InvalidArgument("unknown generation strategy '" + std::string(s) +
                        "'");
}

// ---------------------------------------------------------------------------

namespace {

struct JobOutput {
  std::vector<TextRecord> records;
  std::vector<CampaignFailure> failures;
};

std::optional<std::string> call_with_retry(
    ChatClient& client, const std::vector<ChatMessage>& messages,
    const CampaignOptions& options, std::string* error) {
  const int attempts = std::max(1, options.retry.max_attempts);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0 && options.retry.base_backoff_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(
          options.retry.base_backoff_ms << (attempt - 1)));
    }
    try {
      return client.complete(messages, options.generation);
    } catch (const std::exception& e) {
      *error = e.what();
    }
  }
  return std::nullopt;
}

std::vector<ChatMessage> as_user(std::string prompt) {
  return {{Role::kUser, std::move(prompt)}};
}

TextRecord make_ai_record(const TextRecord& human, std::string id,
                          std::string text, Strategy strategy,
                          const CampaignOptions& options) {
  TextRecord r;
  r.id = std::move(id);
  r.text = std::move(text);
  r.label = Label::kAi;
  r.topic = human.topic;
  r.generator = options.generator.empty() ? "unknown" : options.generator;
  r.strategy = strategy;
  r.pair_id = human.pair_id;
  return r;
}

JobOutput run_paraphrase(const TextRecord& human, ChatClient& client,
                         const CampaignOptions& options) {
  static constexpr Strategy kStages[] = {Strategy::kPara1, Strategy::kPara2,
                                         Strategy::kPara3};
  JobOutput out;
  std::string input = human.text;
  for (int k = 1; k <= options.iterations; ++k) {
    const std::string stage(to_string(kStages[k - 1]));
    std::string error;
    auto reply = call_with_retry(client, as_user(build_paraphrase_prompt(input)),
                                 options, &error);
    if (!reply) {
      out.failures.push_back({human.pair_id, stage, error});
      break;
    }
    std::string text = strip_scaffolding(*reply);
    if (text.empty()) {
      out.failures.push_back({human.pair_id, stage, "empty reply"});
      break;
    }
    out.records.push_back(make_ai_record(human, human.id + "/" + stage, text,
                                         kStages[k - 1], options));
    input = std::move(text);
  }
  return out;
}

JobOutput run_gen10(const TextRecord& human, ChatClient& client,
                    const CampaignOptions& options) {
  JobOutput out;
  std::string error;
  auto reply = call_with_retry(client, as_user(build_gen10_prompt(human.text)),
                               options, &error);
  if (!reply) {
    out.failures.push_back({human.pair_id, "gen10", error});
    return out;
  }
  std::vector<std::string> posts;
  try {
    posts = extract_post_list(*reply, options.gen10_expected);
  } catch (const PostListError& e) {
    out.failures.push_back({human.pair_id, "gen10-parse", e.what()});
    return out;
  }
  for (std::size_t i = 0; i < posts.size(); ++i) {
    const int index = static_cast<int>(i) + 1;
    auto r = make_ai_record(human,
                            human.id + "/gen10/" + std::to_string(index),
                            std::move(posts[i]), Strategy::kGen10, options);
    r.gen_index = index;
    out.records.push_back(std::move(r));
  }
  return out;
}

JobOutput run_topic(const TextRecord& human, ChatClient& client,
                    const CampaignOptions& options) {
  JobOutput out;
  std::string error;
  auto description = call_with_retry(
      client, as_user(build_topic_extraction_prompt(human.text)), options,
      &error);
  if (!description || trim(*description).empty()) {
    out.failures.push_back({human.pair_id, "topic-extract",
                            description ? "empty reply" : error});
    return out;
  }
  const std::string topic(trim(*description));
  auto reply = call_with_retry(client, build_topic_generation_messages(topic),
                               options, &error);
  if (!reply) {
    out.failures.push_back({human.pair_id, "topic-generate", error});
    return out;
  }
  std::string text = strip_scaffolding(*reply);
  if (text.empty()) {
    out.failures.push_back({human.pair_id, "topic-generate", "empty reply"});
    return out;
  }
  auto r = make_ai_record(human, human.id + "/topic", std::move(text),
                          Strategy::kTopic, options);
  r.meta["topic_description"] = topic;
  out.records.push_back(std::move(r));
  return out;
}

}  // namespace

CampaignResult run_generation_campaign(const std::vector<TextRecord>& records,
                                       ChatClient& client,
                                       const CampaignOptions& options) {
  if (options.strategy == CampaignStrategy::kParaphrase &&
      (options.iterations < 1 || options.iterations > 3)) {
    throw InvalidArgument("paraphrase iterations must be in 1..3");
  }
  std::vector<const TextRecord*> humans;
  for (const auto& r : records) {
    if (r.label == Label::kHuman) humans.push_back(&r);
  }
  std::vector<JobOutput> outputs(humans.size());
  parallel_for(humans.size(), options.max_parallel, [&](std::size_t i) {
    switch (options.strategy) {
      case CampaignStrategy::kParaphrase:
        outputs[i] = run_paraphrase(*humans[i], client, options);
        break;
      case CampaignStrategy::kGen10:
        outputs[i] = run_gen10(*humans[i], client, options);
        break;
      case CampaignStrategy::kTopic:
        outputs[i] = run_topic(*humans[i], client, options);
        break;
    }
  });
  CampaignResult result;
  for (auto& o : outputs) {
    for (auto& r : o.records) result.records.push_back(std::move(r));
    for (auto& f : o.failures) result.failures.push_back(std::move(f));
  }
  return result;
}

std::vector<std::string> plan_campaign_prompts(
    const std::vector<TextRecord>& records, CampaignStrategy strategy) {
  std::vector<std::string> prompts;
  for (const auto& r : records) {
    if (r.label != Label::kHuman) continue;
    switch (strategy) {
      case CampaignStrategy::kParaphrase:
        prompts.push_back(build_paraphrase_prompt(r.text));
        break;
      case CampaignStrategy::kGen10:
        prompts.push_back(build_gen10_prompt(r.text));
        break;
      case CampaignStrategy::kTopic:
        prompts.push_back(build_topic_extraction_prompt(r.text));
        break;
    }
  }
  return prompts;
}

}  // namespace aigt

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
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "aigt/error.h"
#include "aigt/text_util.h"

namespace aigt {

using nlohmann::json;

std::string_view to_string(Label label) {
  return label == Label::kHuman ? "human" : "ai";
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kPara1: return "para1";
    case Strategy::kPara2: return "para2";
    case Strategy::kPara3: return "para3";
    case Strategy::kGen10: return "gen10";
    case Strategy::kTopic: return "topic";
  }
  return "";
}

Label parse_label(std::string_view s) {
  if (s == "human") return Label::kHuman;
  if (s == "ai") return Label::kAi;
  throw InvalidArgument("unknown label '" + std::string(s) + "'");
}

Strategy parse_strategy(std::string_view s) {
  if (s == "para1") return Strategy::kPara1;
  if (s == "para2") return Strategy::kPara2;
  if (s == "para3") return Strategy::kPara3;
  if (s == "gen10") return Strategy::kGen10;
  if (s == "topic") return Strategy::kTopic;
  throw InvalidArgument("unknown strategy '" + std::string(s) + "'");
}

void validate_record(const TextRecord& r) {
  if (r.id.empty()) throw InvalidArgument("record has empty id");
  if (trim(r.text).empty()) {
    throw InvalidArgument("record '" + r.id + "' has empty text");
  }
  if (r.pair_id.empty()) {
    throw InvalidArgument("record '" + r.id + "' has empty pair_id");
  }
  if (r.label == Label::kHuman && (r.generator || r.strategy)) {
    throw InvalidArgument("human record '" + r.id +
                          "' must not carry generator or strategy");
  }
  if (r.gen_index && (*r.gen_index < 1 || *r.gen_index > 10)) {
    throw InvalidArgument("record '" + r.id + "' gen_index out of 1..10");
  }
}

json to_json(const TextRecord& r) {
  json j;
  j["id"] = r.id;
  j["text"] = r.text;
  j["label"] = to_string(r.label);
  j["topic"] = r.topic;
  j["pair_id"] = r.pair_id;
  if (r.generator) j["generator"] = *r.generator;
  if (r.strategy) j["strategy"] = to_string(*r.strategy);
  if (r.gen_index) j["gen_index"] = *r.gen_index;
  if (!r.meta.empty()) j["meta"] = r.meta;
  return j;
}

namespace {

const std::string& require_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw InvalidArgument(std::string("missing required field \"") + key +
                          "\"");
  }
  if (!it->is_string()) {
    throw InvalidArgument(std::string("field \"") + key +
                          "\" must be a string");
  }
  return it->get_ref<const std::string&>();
}

}  // namespace

TextRecord record_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("record must be a JSON object");
  TextRecord r;
  r.id = require_string(j, "id");
  r.text = require_string(j, "text");
  r.label = parse_label(require_string(j, "label"));
  r.topic = require_string(j, "topic");
  r.pair_id = require_string(j, "pair_id");
  if (auto it = j.find("generator"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw InvalidArgument("generator must be a string");
    r.generator = it->get<std::string>();
  }
  if (auto it = j.find("strategy"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw InvalidArgument("strategy must be a string");
    r.strategy = parse_strategy(it->get<std::string>());
  }
  if (auto it = j.find("gen_index"); it != j.end() && !it->is_null()) {
    if (!it->is_number_integer()) {
      throw InvalidArgument("gen_index must be an integer");
    }
    r.gen_index = it->get<int>();
  }
  if (auto it = j.find("meta"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw InvalidArgument("meta must be an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) {
        throw InvalidArgument("meta values must be strings");
      }
      r.meta[k] = v.get<std::string>();
    }
  }
  validate_record(r);
  return r;
}

std::vector<TextRecord> read_corpus(std::istream& in) {
  std::vector<TextRecord> records;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    TextRecord r;
    try {
      r = record_from_json(json::parse(line));
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), lineno);
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), lineno);
    }
    if (!ids.insert(r.id).second) {
      throw ParseError("duplicate id '" + r.id + "'", lineno);
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<TextRecord> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file " + path.string());
  return read_corpus(in);
}

void write_corpus(std::ostream& out, const std::vector<TextRecord>& records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

void save_corpus(const std::filesystem::path& path,
                 const std::vector<TextRecord>& records) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write corpus file " + path.string());
  write_corpus(out, records);
}

std::vector<PairGroup> group_pairs(const std::vector<TextRecord>& records) {
  std::vector<PairGroup> groups;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto [it, inserted] = index.try_emplace(r.pair_id, groups.size());
    if (inserted) groups.push_back(PairGroup{r.pair_id, std::nullopt, {}});
    auto& g = groups[it->second];
    if (r.label == Label::kHuman) {
      if (g.human) {
        throw InvalidArgument("pair '" + r.pair_id +
                              "' has more than one human record");
      }
      g.human = i;
    } else {
      g.ai.push_back(i);
    }
  }
  for (const auto& g : groups) {
    if (!g.human) {
      throw InvalidArgument("AI record(s) of pair '" + g.pair_id +
                            "' have no human partner");
    }
  }
  return groups;
}

// ---------------------------------------------------------------------------

namespace {

bool at_token_start(std::string_view s, std::size_t i) {
  return i == 0 || is_ascii_space(s[i - 1]);
}

std::size_t skip_to_space(std::string_view s, std::size_t i) {
  while (i < s.size() && !is_ascii_space(s[i])) ++i;
  return i;
}

std::string strip_entities_once(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const std::string_view rest = s.substr(i);
    if (starts_with_icase(rest, "http://") ||
        starts_with_icase(rest, "https://") ||
        (at_token_start(s, i) && starts_with_icase(rest, "t.co/"))) {
      i = skip_to_space(s, i);
      continue;
    }
    if (s[i] == '@' && i + 1 < s.size() && is_ascii_word(s[i + 1])) {
      ++i;
      while (i < s.size() && is_ascii_word(s[i])) ++i;
      continue;
    }
    out.push_back(s[i]);
    ++i;
  }
  return collapse_whitespace(out);
}

bool has_intro_cue(std::string_view line) {
  static const char* const kCues[] = {"here",      "tweet",  "post",
                                      "sure",      "certainly", "of course",
                                      "okay"};
  const std::string lower = ascii_lower(line);
  for (const char* cue : kCues) {
    if (lower.find(cue) != std::string::npos) return true;
  }
  return false;
}

std::string join_lines(const std::vector<std::string_view>& lines,
                       std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back('\n');
    out.append(lines[i]);
  }
  return out;
}

std::optional<std::string> unquote(std::string_view s) {
  struct QuotePair {
    std::string_view open, close;
  };
  static constexpr QuotePair kPairs[] = {
      {"\"", "\""}, {"'", "'"}, {"\xE2\x80\x9C", "\xE2\x80\x9D"}};
  for (const auto& q : kPairs) {
    if (s.size() < q.open.size() + q.close.size()) continue;
    if (!s.starts_with(q.open) || !s.ends_with(q.close)) continue;
    std::string_view inner =
        s.substr(q.open.size(), s.size() - q.open.size() - q.close.size());
    if (inner.find(q.open) != std::string_view::npos ||
        inner.find(q.close) != std::string_view::npos) {
      continue;
    }
    if (trim(inner).empty()) continue;
    return std::string(trim(inner));
  }
  return std::nullopt;
}

std::string strip_scaffolding_once(std::string_view text) {
  std::string s(trim(text));
  auto lines = split_lines(s);
  if (lines.size() >= 2) {
    std::string_view first = trim(lines.front());
    std::string rest(trim(join_lines(lines, 1, lines.size())));
    if (first.ends_with(':') && has_intro_cue(first) && !rest.empty()) {
      return rest;
    }
    std::string_view last = trim(lines.back());
    std::string head(trim(join_lines(lines, 0, lines.size() - 1)));
    if (starts_with_icase(last, "let me know") && !head.empty()) {
      return head;
    }
  }
  if (auto inner = unquote(s)) return *inner;
  return s;
}

}  // namespace

std::string strip_entities(std::string_view text) {
  std::string cur = strip_entities_once(text);
  for (;;) {
    std::string next = strip_entities_once(cur);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

std::string strip_scaffolding(std::string_view text) {
  std::string cur = strip_scaffolding_once(text);
  for (;;) {
    std::string next = strip_scaffolding_once(cur);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

// ---------------------------------------------------------------------------

std::vector<std::string> default_refusal_lexicon() {
  return {"as an ai", "i cannot", "i can't assist", "i'm sorry, but"};
}

std::vector<std::string> load_phrase_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open phrase list " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(t);
  }
  return out;
}

bool is_refusal(std::string_view text,
                const std::vector<std::string>& lexicon) {
  const std::string folded = fold_for_match(text);
  for (const auto& phrase : lexicon) {
    if (folded.find(fold_for_match(phrase)) != std::string::npos) return true;
  }
  return false;
}

namespace {

std::vector<TextRecord> drop_pairs(const std::vector<TextRecord>& records,
                                   const std::set<std::string>& pair_ids) {
  std::vector<TextRecord> kept;
  kept.reserve(records.size());
  for (const auto& r : records) {
    if (!pair_ids.contains(r.pair_id)) kept.push_back(r);
  }
  return kept;
}

}  // namespace

RefusalFilterResult filter_refusals(const std::vector<TextRecord>& records,
                                    const std::vector<std::string>& lexicon) {
  RefusalFilterResult result;
  std::set<std::string> dropped;
  for (const auto& r : records) {
    if (r.label != Label::kAi || dropped.contains(r.pair_id)) continue;
    if (is_refusal(r.text, lexicon)) {
      dropped.insert(r.pair_id);
      result.dropped_pair_ids.push_back(r.pair_id);
    }
  }
  result.kept = drop_pairs(records, dropped);
  return result;
}

bool pattern_matches(std::string_view text, std::string_view pattern) {
  const std::string folded = fold_for_match(text);
  std::size_t start = 0;
  for (;;) {
    const std::size_t amp = pattern.find(" & ", start);
    std::string_view part = trim(pattern.substr(
        start, amp == std::string_view::npos ? std::string_view::npos
                                             : amp - start));
    if (!part.empty() &&
        folded.find(fold_for_match(part)) == std::string::npos) {
      return false;
    }
    if (amp == std::string_view::npos) return true;
    start = amp + 3;
  }
}

std::vector<TagCondition> default_tag_conditions() {
  return {
      {"Data Privacy",
       {"NSA", "NSA & spying", "privacy & leak", "data & leak",
        "Equifax & data breach", "Cambridge Analytica"}},
      {"Climate Change",
       {"#ClimateChange", "#GlobalWarming", "#ClimateChangeScam",
        "#GlobalWarmingHoax", "#JunkScience", "#GlobalCooling",
        "#GlobalWarmingIsNotReal"}},
      {"Abortion",
       {"#Prochoice", "#Abortion", "#Prolife", "#PrayToEndAbortion",
        "#EndAbortion", "#PlannedParenthood"}},
      {"Feminism",
       {"#Feminism", "#FeministsAreUgly", "#INeedFeminismBecause",
        "#WomenAgainstFeminism", "#FeminismIsAwful"}},
      {"Refugees and Migrants", {"refugees are", "migrants are"}},
  };
}

std::vector<TagCondition> tag_conditions_from_json(const json& j) {
  if (!j.is_object()) {
    throw ParseError("tag-condition file must be a JSON object");
  }
  std::vector<TagCondition> out;
  for (const auto& [topic, patterns] : j.items()) {
    if (!patterns.is_array() || patterns.empty()) {
      throw ParseError("topic '" + topic +
                       "' must map to a non-empty list of patterns");
    }
    TagCondition c{topic, {}};
    for (const auto& p : patterns) {
      if (!p.is_string() || trim(p.get<std::string>()).empty()) {
        throw ParseError("topic '" + topic + "' has a non-string pattern");
      }
      c.patterns.push_back(p.get<std::string>());
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<TagCondition> load_tag_conditions(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open tag-condition file " + path.string());
  try {
    return tag_conditions_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed tag-condition file: ") + e.what());
  }
}

std::vector<TextRecord> pairwise_tag_filter(
    const std::vector<TextRecord>& records,
    const std::vector<TagCondition>& conditions,
    std::vector<std::string>* dropped_pair_ids) {
  std::map<std::string, const TagCondition*> by_topic;
  for (const auto& c : conditions) by_topic[ascii_lower(trim(c.topic))] = &c;

  std::set<std::string> dropped;
  for (const auto& g : group_pairs(records)) {
    const auto& human = records[*g.human];
    auto it = by_topic.find(ascii_lower(trim(human.topic)));
    if (it == by_topic.end()) continue;
    bool keep = true;
    for (const auto& pattern : it->second->patterns) {
      if (!pattern_matches(human.text, pattern)) continue;
      for (std::size_t ai : g.ai) {
        if (!pattern_matches(records[ai].text, pattern)) keep = false;
      }
    }
    if (!keep) {
      dropped.insert(g.pair_id);
      if (dropped_pair_ids) dropped_pair_ids->push_back(g.pair_id);
    }
  }
  return drop_pairs(records, dropped);
}

std::vector<TextRecord> pairwise_tag_filter(
    const std::vector<TextRecord>& records,
    const std::vector<TagCondition>& conditions) {
  return pairwise_tag_filter(records, conditions, nullptr);
}

std::vector<TextRecord> condense_gen10(const std::vector<TextRecord>& records) {
  std::unordered_set<std::size_t> keep;
  for (const auto& g : group_pairs(records)) {
    keep.insert(*g.human);
    if (g.ai.empty()) continue;
    std::size_t best = g.ai.front();
    for (std::size_t i : g.ai) {
      if (records[i].gen_index.value_or(0) <
          records[best].gen_index.value_or(0)) {
        best = i;
      }
    }
    keep.insert(best);
  }
  std::vector<TextRecord> out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (keep.contains(i)) out.push_back(records[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

Split split_dataset(const std::vector<TextRecord>& records,
                    const SplitSpec& spec) {
  if (spec.train_per_class < 1) {
    throw InvalidArgument("train_per_class must be >= 1");
  }
  const auto groups = group_pairs(records);
  for (const auto& g : groups) {
    if (g.ai.size() != 1) {
      throw InvalidArgument("pair '" + g.pair_id +
                            "' is not 1:1; condense generate-10 lists first");
    }
  }
  if (groups.size() < spec.train_per_class) {
    std::ostringstream msg;
    msg << "only " << groups.size() << " pairs available for "
        << spec.train_per_class << " training samples per class";
    if (spec.train_per_class > kFallbackTrainPerClass &&
        groups.size() >= kFallbackTrainPerClass) {
      msg << "; retry with train_per_class=" << kFallbackTrainPerClass;
    }
    throw InvalidArgument(msg.str());
  }

  std::vector<std::size_t> order(groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[uniform_below(rng, i)]);
  }
  std::unordered_set<std::string> train_pairs;
  for (std::size_t i = 0; i < spec.train_per_class; ++i) {
    train_pairs.insert(groups[order[i]].pair_id);
  }
  Split split;
  for (const auto& r : records) {
    (train_pairs.contains(r.pair_id) ? split.train : split.test).push_back(r);
  }
  return split;
}

// ---------------------------------------------------------------------------

json IngestSummary::to_json() const {
  json j;
  j["input_records"] = input_records;
  j["output_records"] = output_records;
  j["unpaired_dropped"] = unpaired_dropped;
  j["refusal_pairs_dropped"] = refusal_pairs.size();
  j["tag_pairs_dropped"] = tag_pairs.size();
  j["empty_text_pairs_dropped"] = empty_text_pairs.size();
  j["scaffolding_modified"] = scaffolding_modified;
  j["entities_modified"] = entities_modified;
  j["refusal_pair_ids"] = refusal_pairs;
  j["tag_pair_ids"] = tag_pairs;
  j["empty_text_pair_ids"] = empty_text_pairs;
  return j;
}

IngestResult ingest(const std::vector<TextRecord>& input,
                    const IngestOptions& options) {
  IngestResult result;
  auto& summary = result.summary;
  summary.input_records = input.size();

  std::vector<TextRecord> records;
  if (options.drop_unpaired) {
    std::unordered_set<std::string> paired;
    for (const auto& g : group_pairs(input)) {
      if (!g.ai.empty()) paired.insert(g.pair_id);
    }
    for (const auto& r : input) {
      if (paired.contains(r.pair_id)) {
        records.push_back(r);
      } else {
        ++summary.unpaired_dropped;
      }
    }
  } else {
    records = input;
    group_pairs(records);
  }

  if (options.condense_gen10) records = condense_gen10(records);

  if (options.strip_scaffolding) {
    for (auto& r : records) {
      if (r.label != Label::kAi) continue;
      std::string stripped = strip_scaffolding(r.text);
      if (stripped != r.text) {
        ++summary.scaffolding_modified;
        r.text = std::move(stripped);
      }
    }
  }

  if (options.refusal_lexicon) {
    auto filtered = filter_refusals(records, *options.refusal_lexicon);
    records = std::move(filtered.kept);
    summary.refusal_pairs = std::move(filtered.dropped_pair_ids);
  }

  if (options.tag_conditions) {
    records = pairwise_tag_filter(records, *options.tag_conditions,
                                  &summary.tag_pairs);
  }

  if (options.strip_entities) {
    std::set<std::string> emptied;
    for (auto& r : records) {
      std::string stripped = strip_entities(r.text);
      if (stripped != r.text) {
        ++summary.entities_modified;
        r.text = std::move(stripped);
      }
      if (r.text.empty() && emptied.insert(r.pair_id).second) {
        summary.empty_text_pairs.push_back(r.pair_id);
      }
    }
    records = drop_pairs(records, emptied);
  }

  summary.output_records = records.size();
  result.records = std::move(records);
  return result;
}

}  // namespace aigt

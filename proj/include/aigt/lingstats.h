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

#ifndef AIGT_LINGSTATS_H_
#define AIGT_LINGSTATS_H_

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "aigt/corpus.h"
#include "json.hpp"

namespace aigt {

// ---------------------------------------------------------------------------
// Lexicons

using WordSet = std::unordered_set<std::string>;
using Phrase = std::vector<std::string>;

// Word lists used by feature extraction. Entries are normalized with
// normalize_word(); multiword phrases are stored as token sequences.
struct Lexicons {
  WordSet dictionary;
  WordSet offensive;
  WordSet profanity;
  WordSet slang;
  WordSet first_person;
  WordSet second_person;
  WordSet third_person;
  WordSet impersonal;
  WordSet demonstrative;
  WordSet indefinite;
  WordSet public_verbs;
  WordSet private_verbs;
  WordSet suasive_verbs;
  WordSet possibility_modals;
  WordSet prediction_modals;
  WordSet place_adverbials;
  WordSet time_adverbials;
  WordSet discourse_particles;
  WordSet prepositions;
  WordSet wh_words;
  std::vector<Phrase> conjuncts;
  std::vector<Phrase> emphatics;
  std::unordered_map<std::string, std::string> tagger_lexicon;
};

// Copies of data/lexicons compiled into the library.
const Lexicons& builtin_lexicons();
// Builtin lists, each replaced by `<dir>/<file>` when that file exists.
Lexicons load_lexicons(const std::filesystem::path& dir);
// Names of the lexicon files understood by load_lexicons.
std::vector<std::string> lexicon_file_names();

// Lowercases, folds typographic apostrophes, and strips a trailing period
// ("e.g." -> "e.g").
std::string normalize_word(std::string_view w);

// ---------------------------------------------------------------------------
// Tokens and tagging

enum class TokenKind { kWord, kNumber, kMention, kHashtag, kUrl, kEmoji, kPunct };

struct LingToken {
  std::string text;   // as written
  std::string lower;  // normalize_word(text)
  TokenKind kind = TokenKind::kWord;
};

// Whitespace chunks, with URLs/mentions/hashtags kept whole, emoji runs split
// off, and leading/trailing punctuation separated into kPunct tokens.
std::vector<LingToken> tokenize_for_features(std::string_view text);

// Assigns a Penn-style tag to each token (same length as the input).
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<std::string> tag(
      const std::vector<LingToken>& tokens) const = 0;
};

// Lexicon lookup, then suffix rules, then a little left context. Fast and
// dependency-free but far less accurate than a trained tagger.
class HeuristicTagger : public Tagger {
 public:
  explicit HeuristicTagger(const Lexicons& lexicons);
  std::vector<std::string> tag(
      const std::vector<LingToken>& tokens) const override;

 private:
  const Lexicons& lex_;
};

// Parses "word/TAG word/TAG ..." (the split is at the last '/').
void parse_pretagged(std::string_view pretagged, std::vector<LingToken>& tokens,
                     std::vector<std::string>& tags);

// ---------------------------------------------------------------------------
// Features

// Feature names in report order.
const std::vector<std::string>& feature_inventory();

struct FeatureVector {
  std::string record_id;
  std::map<std::string, double> values;
  // Raw counts behind the rate features (same names).
  std::map<std::string, double> counts;
  std::size_t n_tokens = 0;
};

// Count features are per-token rates (count / non-punctuation tokens);
// length_chars is in code points; TTR, wordLength and upper_lower_ratio are
// per text; swear_any and slang_any are 0/1. Throws InvalidArgument on
// blank text.
FeatureVector extract_features(std::string_view text, const Lexicons& lexicons,
                               const Tagger& tagger,
                               std::string record_id = {});

// Same, with tokens and tags supplied by an external tagger. Surface
// character features still come from `text`.
FeatureVector extract_features_tagged(std::string_view text,
                                      const std::vector<LingToken>& tokens,
                                      const std::vector<std::string>& tags,
                                      const Lexicons& lexicons,
                                      std::string record_id = {});

// Code points in the emoji presentation / pictograph blocks.
bool is_emoji_codepoint(char32_t cp);
std::size_t count_emoji(std::string_view text);

// ---------------------------------------------------------------------------
// Statistics

struct MannWhitney {
  double u_b = 0.0;  // pairs where b > a, ties counted 0.5
  double p_value = 1.0;
};

// Two-sided normal approximation with tie-corrected variance and a 0.5
// continuity correction. p is 1 when every value is tied.
MannWhitney mann_whitney(const std::vector<double>& a,
                         const std::vector<double>& b);

double rank_biserial(double u_b, std::size_t n_a, std::size_t n_b);

enum class EffectBand { kNone, kSmall, kMedium, kLarge };
std::string_view to_string(EffectBand b);
EffectBand band(double r);

struct EffectSizeRow {
  std::string feature;
  double mean_a = 0.0;  // human
  double mean_b = 0.0;  // AI
  double u_statistic = 0.0;
  double r = 0.0;
  double p_value = 1.0;
  EffectBand band = EffectBand::kNone;
};

struct EffectSizeReport {
  std::vector<EffectSizeRow> rows;
  std::size_t n_human = 0;
  std::size_t n_ai = 0;
  nlohmann::json metadata = nlohmann::json::object();
};

// Positive r means the feature is higher in the AI group. Throws
// InvalidArgument when a group is empty or a feature is missing.
EffectSizeReport compare_corpora(const std::vector<FeatureVector>& human,
                                 const std::vector<FeatureVector>& ai,
                                 const std::vector<std::string>& features);

// Columns: feature, mean_human, mean_ai, U, R, p, band.
std::string to_csv(const EffectSizeReport& report);
std::string to_markdown(const EffectSizeReport& report);

// Extracts features for every record (bounded parallelism). Records with a
// "pos" meta entry in word/TAG form use those tags instead of `tagger`.
std::vector<FeatureVector> extract_corpus_features(
    const std::vector<TextRecord>& records, const Lexicons& lexicons,
    const Tagger& tagger, std::size_t max_parallel = 1);

}  // namespace aigt

#endif  // AIGT_LINGSTATS_H_

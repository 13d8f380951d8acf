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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "aigt/error.h"
#include "aigt/parallel.h"
#include "aigt/text_util.h"
#include "embedded_lexicons.h"

namespace aigt {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Lexicon plumbing

struct LexiconSlot {
  const char* file;
  WordSet Lexicons::*words = nullptr;
  std::vector<Phrase> Lexicons::*phrases = nullptr;
};

const std::vector<LexiconSlot>& slots() {
  static const std::vector<LexiconSlot> kSlots = {
      {"dictionary.txt", &Lexicons::dictionary},
      {"offensive.txt", &Lexicons::offensive},
      {"profanity.txt", &Lexicons::profanity},
      {"slang.txt", &Lexicons::slang},
      {"pronouns_first.txt", &Lexicons::first_person},
      {"pronouns_second.txt", &Lexicons::second_person},
      {"pronouns_third.txt", &Lexicons::third_person},
      {"pronouns_impersonal.txt", &Lexicons::impersonal},
      {"pronouns_demonstrative.txt", &Lexicons::demonstrative},
      {"pronouns_indefinite.txt", &Lexicons::indefinite},
      {"verbs_public.txt", &Lexicons::public_verbs},
      {"verbs_private.txt", &Lexicons::private_verbs},
      {"verbs_suasive.txt", &Lexicons::suasive_verbs},
      {"modals_possibility.txt", &Lexicons::possibility_modals},
      {"modals_prediction.txt", &Lexicons::prediction_modals},
      {"adverbials_place.txt", &Lexicons::place_adverbials},
      {"adverbials_time.txt", &Lexicons::time_adverbials},
      {"discourse_particles.txt", &Lexicons::discourse_particles},
      {"prepositions.txt", &Lexicons::prepositions},
      {"wh_words.txt", &Lexicons::wh_words},
      {"conjuncts.txt", nullptr, &Lexicons::conjuncts},
      {"emphatics.txt", nullptr, &Lexicons::emphatics},
  };
  return kSlots;
}

constexpr const char* kTaggerLexiconFile = "tagger_lexicon.tsv";

std::vector<std::string> content_lines(std::string_view content) {
  std::vector<std::string> out;
  for (const auto& raw : split_lines(content)) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    out.emplace_back(line);
  }
  return out;
}

void fill_slot(Lexicons& lex, const LexiconSlot& slot, std::string_view content) {
  if (slot.words != nullptr) {
    WordSet& set = lex.*slot.words;
    set.clear();
    for (const auto& line : content_lines(content)) set.insert(normalize_word(line));
  } else {
    std::vector<Phrase>& phrases = lex.*slot.phrases;
    phrases.clear();
    for (const auto& line : content_lines(content)) {
      Phrase p;
      for (const auto& w : split_whitespace(line)) p.push_back(normalize_word(w));
      if (!p.empty()) phrases.push_back(std::move(p));
    }
    // Longest first so greedy matching prefers "in contrast" over "in".
    std::stable_sort(phrases.begin(), phrases.end(),
                     [](const Phrase& a, const Phrase& b) {
                       return a.size() > b.size();
                     });
  }
}

void fill_tagger(Lexicons& lex, std::string_view content) {
  lex.tagger_lexicon.clear();
  for (const auto& line : content_lines(content)) {
    const auto fields = split_whitespace(line);
    if (fields.size() != 2) {
      throw InvalidArgument("tagger lexicon line needs 'word TAG': " + line);
    }
    lex.tagger_lexicon[normalize_word(fields[0])] = fields[1];
  }
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Tokenization helpers

std::u32string decode32(std::string_view s) {
  const std::vector<char32_t> v = utf8_decode(s);
  return std::u32string(v.begin(), v.end());
}

bool is_ascii_punct(char32_t c) {
  return c < 0x80 && std::ispunct(static_cast<unsigned char>(c)) != 0;
}

bool is_quote_mark(char32_t c) {
  return c == 0x2018 || c == 0x2019 || c == 0x201C || c == 0x201D ||
         c == 0x2026 || c == 0x2014 || c == 0x2013;
}

bool is_emoji_joiner(char32_t c) {
  return c == 0x200D || c == 0xFE0F || c == 0xFE0E || c == 0x20E3;
}

bool has_word_char(std::u32string_view s) {
  return std::any_of(s.begin(), s.end(), [](char32_t c) {
    return c >= 0x80 || is_ascii_word(static_cast<char>(c));
  });
}

std::string encode(std::u32string_view s) {
  std::string out;
  for (char32_t c : s) out += utf8_encode(c);
  return out;
}

TokenKind classify_core(std::u32string_view core) {
  const std::string s = ascii_lower(encode(core));
  if (starts_with_icase(s, "http://") || starts_with_icase(s, "https://") ||
      starts_with_icase(s, "www.")) {
    return TokenKind::kUrl;
  }
  if (core.size() > 1 && (core[0] == '@' || core[0] == '#') &&
      has_word_char(core.substr(1))) {
    return core[0] == '@' ? TokenKind::kMention : TokenKind::kHashtag;
  }
  if (std::all_of(core.begin(), core.end(),
                  [](char32_t c) { return is_emoji_codepoint(c) || is_emoji_joiner(c); })) {
    return TokenKind::kEmoji;
  }
  bool digit = false;
  bool other = false;
  for (char32_t c : core) {
    if (c >= '0' && c <= '9') {
      digit = true;
    } else if (c != '.' && c != ',' && c != '%' && c != '$') {
      other = true;
    }
  }
  if (digit && !other) return TokenKind::kNumber;
  if (!has_word_char(core)) return TokenKind::kPunct;
  return TokenKind::kWord;
}

void push_token(std::vector<LingToken>& out, std::u32string_view s, TokenKind kind) {
  LingToken t;
  t.text = encode(s);
  t.lower = normalize_word(t.text);
  t.kind = kind;
  out.push_back(std::move(t));
}

void tokenize_segment(std::u32string_view seg, std::vector<LingToken>& out) {
  const std::string lowered = ascii_lower(encode(seg));
  const bool url = starts_with_icase(lowered, "http://") ||
                   starts_with_icase(lowered, "https://") ||
                   starts_with_icase(lowered, "www.");
  auto strippable = [](char32_t c) { return is_ascii_punct(c) || is_quote_mark(c); };
  std::size_t b = 0;
  std::size_t e = seg.size();
  if (!url) {
    while (b < e && strippable(seg[b])) {
      // Keep the sigil of a mention or hashtag.
      if ((seg[b] == '@' || seg[b] == '#') && b + 1 < e &&
          !strippable(seg[b + 1])) {
        break;
      }
      ++b;
    }
  }
  while (e > b && strippable(seg[e - 1])) {
    if (url && seg[e - 1] == '/') break;
    --e;
  }
  for (std::size_t i = 0; i < b; ++i) push_token(out, seg.substr(i, 1), TokenKind::kPunct);
  if (e > b) {
    const auto core = seg.substr(b, e - b);
    push_token(out, core, url ? TokenKind::kUrl : classify_core(core));
  }
  // Runs like "?!" or "..." become a single punctuation token.
  if (e < seg.size()) push_token(out, seg.substr(e), TokenKind::kPunct);
}

bool is_sentence_punct(const LingToken& t) {
  return t.kind == TokenKind::kPunct &&
         t.text.find_first_of(".!?") != std::string::npos;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

// "don't" -> "do", "i'm" -> "i", "it's" -> "it"; otherwise the word itself.
std::string clitic_stem(const std::string& w) {
  if (ends_with(w, "n't") && w.size() > 3) {
    const std::string stem = w.substr(0, w.size() - 3);
    if (stem == "ca") return "can";
    if (stem == "wo") return "will";
    if (stem == "sha") return "shall";
    return stem;
  }
  const auto apos = w.rfind('\'');
  if (apos != std::string::npos && apos > 0) {
    const std::string suffix = w.substr(apos);
    if (suffix == "'s" || suffix == "'re" || suffix == "'ve" ||
        suffix == "'ll" || suffix == "'d" || suffix == "'m") {
      return w.substr(0, apos);
    }
  }
  return w;
}

std::string clitic_of(const std::string& w) {
  if (ends_with(w, "n't")) return "n't";
  const auto apos = w.rfind('\'');
  if (apos == std::string::npos || apos == 0) return {};
  return w.substr(apos);
}

bool is_verb_tag(std::string_view tag) { return starts_with(tag, "VB"); }
bool is_noun_tag(std::string_view tag) { return starts_with(tag, "NN"); }
bool is_adj_tag(std::string_view tag) { return starts_with(tag, "JJ"); }

const WordSet& be_forms() {
  static const WordSet kSet = {"be", "am", "is", "are", "was", "were", "been", "being"};
  return kSet;
}

const WordSet& have_forms() {
  static const WordSet kSet = {"have", "has", "had", "having"};
  return kSet;
}

const WordSet& do_forms() {
  static const WordSet kSet = {"do", "does", "did", "doing", "done"};
  return kSet;
}

const WordSet& aux_words() {
  static const WordSet kSet = {"is",    "are",  "was",   "were",   "am",
                               "be",    "been", "do",    "does",   "did",
                               "have",  "has",  "had",   "can",    "could",
                               "will",  "would", "shall", "should", "may",
                               "might", "must"};
  return kSet;
}

const WordSet& s_contraction_stems() {
  static const WordSet kSet = {"it",   "he",    "she", "that", "there", "here",
                               "what", "where", "who", "how",  "let",   "when",
                               "why",  "this",  "everyone", "everything",
                               "someone", "something", "nobody", "nothing"};
  return kSet;
}

std::vector<std::string> verb_lemma_candidates(const std::string& w) {
  std::vector<std::string> out{w};
  const std::size_t n = w.size();
  auto doubled = [&](std::size_t cut) {
    return n > cut + 1 && w[n - cut - 1] == w[n - cut - 2];
  };
  if (n > 4 && ends_with(w, "ies")) out.push_back(w.substr(0, n - 3) + "y");
  if (n > 3 && ends_with(w, "es")) out.push_back(w.substr(0, n - 2));
  if (n > 2 && ends_with(w, "s")) out.push_back(w.substr(0, n - 1));
  if (n > 4 && ends_with(w, "ied")) out.push_back(w.substr(0, n - 3) + "y");
  if (n > 3 && ends_with(w, "ed")) {
    out.push_back(w.substr(0, n - 2));
    out.push_back(w.substr(0, n - 1));
    if (doubled(2)) out.push_back(w.substr(0, n - 3));
  }
  if (n > 4 && ends_with(w, "ing")) {
    out.push_back(w.substr(0, n - 3));
    out.push_back(w.substr(0, n - 3) + "e");
    if (doubled(3)) out.push_back(w.substr(0, n - 4));
  }
  return out;
}

bool verb_in(const WordSet& set, const std::string& w) {
  for (const auto& c : verb_lemma_candidates(w)) {
    if (set.contains(c)) return true;
  }
  return false;
}

bool is_nominalization(const LingToken& t) {
  if (t.kind != TokenKind::kWord || t.lower.size() < 6) return false;
  if (!std::all_of(t.lower.begin(), t.lower.end(),
                   [](char c) { return c >= 'a' && c <= 'z'; })) {
    return false;
  }
  for (std::string_view suf : {"tion", "tions", "ment", "ments", "ness",
                               "nesses", "ity", "ities"}) {
    if (ends_with(t.lower, suf)) return true;
  }
  return false;
}

bool is_alpha_word(const std::string& w) {
  bool letter = false;
  for (char c : w) {
    if (c >= 'a' && c <= 'z') {
      letter = true;
    } else if (c != '\'') {
      return false;
    }
  }
  return letter;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string normalize_word(std::string_view w) {
  std::string s = fold_for_match(w);
  while (s.size() > 1 && s.back() == '.') s.pop_back();
  return s;
}

std::vector<std::string> lexicon_file_names() {
  std::vector<std::string> names;
  for (const auto& s : slots()) names.emplace_back(s.file);
  names.emplace_back(kTaggerLexiconFile);
  return names;
}

const Lexicons& builtin_lexicons() {
  static const Lexicons kLexicons = [] {
    Lexicons lex;
    auto find = [](std::string_view name) -> std::string_view {
      for (std::size_t i = 0; i < detail::kEmbeddedLexiconCount; ++i) {
        if (name == detail::kEmbeddedLexicons[i].name) {
          return detail::kEmbeddedLexicons[i].data;
        }
      }
      throw Error("lexicon '" + std::string(name) + "' missing from build");
    };
    for (const auto& slot : slots()) fill_slot(lex, slot, find(slot.file));
    fill_tagger(lex, find(kTaggerLexiconFile));
    return lex;
  }();
  return kLexicons;
}

Lexicons load_lexicons(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw InvalidArgument("lexicon directory not found: " + dir.string());
  }
  Lexicons lex = builtin_lexicons();
  for (const auto& slot : slots()) {
    const auto p = dir / slot.file;
    if (std::filesystem::exists(p)) fill_slot(lex, slot, read_file(p));
  }
  const auto tagger = dir / kTaggerLexiconFile;
  if (std::filesystem::exists(tagger)) fill_tagger(lex, read_file(tagger));
  return lex;
}

bool is_emoji_codepoint(char32_t c) {
  return (c >= 0x1F300 && c <= 0x1F5FF) ||  // symbols and pictographs
         (c >= 0x1F600 && c <= 0x1F64F) ||  // emoticons
         (c >= 0x1F680 && c <= 0x1F6FF) ||  // transport and map
         (c >= 0x1F900 && c <= 0x1F9FF) ||  // supplemental pictographs
         (c >= 0x1FA70 && c <= 0x1FAFF) ||  // pictographs extended-A
         (c >= 0x1F1E6 && c <= 0x1F1FF) ||  // regional indicators
         (c >= 0x2600 && c <= 0x27BF) ||    // misc symbols, dingbats
         (c >= 0x2B05 && c <= 0x2B07) || c == 0x2B1B || c == 0x2B1C ||
         c == 0x2B50 || c == 0x2B55 || c == 0x231A || c == 0x231B ||
         (c >= 0x23E9 && c <= 0x23F3) || (c >= 0x23F8 && c <= 0x23FA) ||
         c == 0x1F004 || c == 0x1F0CF || c == 0x1F18E ||
         (c >= 0x1F191 && c <= 0x1F19A) || c == 0x1F201 || c == 0x1F21A ||
         c == 0x1F22F || (c >= 0x1F232 && c <= 0x1F23A) ||
         c == 0x1F250 || c == 0x1F251;
}

std::size_t count_emoji(std::string_view text) {
  std::size_t n = 0;
  for (char32_t c : decode32(text)) n += is_emoji_codepoint(c) ? 1 : 0;
  return n;
}

std::vector<LingToken> tokenize_for_features(std::string_view text) {
  std::vector<LingToken> out;
  for (const auto& chunk : split_whitespace(text)) {
    const std::u32string cps = decode32(chunk);
    const std::string lowered = ascii_lower(chunk);
    if (starts_with_icase(lowered, "http://") ||
        starts_with_icase(lowered, "https://") ||
        starts_with_icase(lowered, "www.")) {
      tokenize_segment(cps, out);
      continue;
    }
    // Alternate emoji and non-emoji runs.
    std::size_t i = 0;
    while (i < cps.size()) {
      const bool emoji = is_emoji_codepoint(cps[i]);
      std::size_t j = i + 1;
      while (j < cps.size()) {
        const bool e = is_emoji_codepoint(cps[j]);
        if (is_emoji_joiner(cps[j])) {
          if (!emoji) break;
        } else if (e != emoji) {
          break;
        }
        ++j;
      }
      const std::u32string_view run(cps.data() + i, j - i);
      if (emoji) {
        push_token(out, run, TokenKind::kEmoji);
      } else {
        tokenize_segment(run, out);
      }
      i = j;
    }
  }
  return out;
}

void parse_pretagged(std::string_view pretagged, std::vector<LingToken>& tokens,
                     std::vector<std::string>& tags) {
  tokens.clear();
  tags.clear();
  for (const auto& item : split_whitespace(pretagged)) {
    const auto slash = item.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == item.size()) {
      throw InvalidArgument("pre-tagged token needs word/TAG form: '" + item + "'");
    }
    const std::u32string word = decode32(item.substr(0, slash));
    push_token(tokens, word, classify_core(word));
    tags.push_back(item.substr(slash + 1));
  }
}

HeuristicTagger::HeuristicTagger(const Lexicons& lexicons) : lex_(lexicons) {}

std::vector<std::string> HeuristicTagger::tag(
    const std::vector<LingToken>& tokens) const {
  std::vector<std::string> tags(tokens.size());
  std::string prev_tag = ".";
  std::string prev_word;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const LingToken& t = tokens[i];
    const bool sentence_start = prev_tag == ".";
    std::string tag;
    switch (t.kind) {
      case TokenKind::kPunct:
        tag = t.text.find_first_of(".!?") != std::string::npos ? "." : ",";
        break;
      case TokenKind::kMention:
      case TokenKind::kHashtag:
        tag = "NNP";
        break;
      case TokenKind::kUrl:
      case TokenKind::kEmoji:
        tag = "SYM";
        break;
      case TokenKind::kNumber:
        tag = "CD";
        break;
      case TokenKind::kWord: {
        const std::string base = clitic_stem(t.lower);
        const bool subject_before =
            prev_tag == "PRP" || prev_tag == "NNS" || prev_tag == "WP" ||
            prev_tag == "WDT" || prev_tag == "EX";
        const bool nominal_before = prev_tag == "DT" || prev_tag == "PRP$" ||
                                    is_adj_tag(prev_tag);
        if (auto it = lex_.tagger_lexicon.find(base);
            it != lex_.tagger_lexicon.end()) {
          tag = it->second;
          if (tag == "VB") {
            if (prev_tag == "MD" || prev_tag == "TO") {
              tag = "VB";
            } else if (subject_before) {
              tag = "VBP";
            } else if (nominal_before) {
              tag = "NN";
            } else if (!sentence_start) {
              tag = "VBP";
            }
          }
          break;
        }
        const std::string& w = base;
        const std::size_t n = w.size();
        if (!sentence_start && !t.text.empty() &&
            std::isupper(static_cast<unsigned char>(t.text[0])) != 0) {
          tag = "NNP";
        } else if (n > 4 && ends_with(w, "ly")) {
          tag = "RB";
        } else if (n > 4 && ends_with(w, "ing")) {
          tag = nominal_before ? "NN" : "VBG";
        } else if (n > 3 && ends_with(w, "ed")) {
          if (have_forms().contains(prev_word) || be_forms().contains(prev_word)) {
            tag = "VBN";
          } else if (nominal_before) {
            tag = "JJ";
          } else {
            tag = "VBD";
          }
        } else if (n > 5 && (ends_with(w, "tion") || ends_with(w, "sion") ||
                             ends_with(w, "ment") || ends_with(w, "ness") ||
                             ends_with(w, "ity") || ends_with(w, "ism") ||
                             ends_with(w, "ship") || ends_with(w, "ance") ||
                             ends_with(w, "ence") || ends_with(w, "hood"))) {
          tag = "NN";
        } else if (n > 6 && (ends_with(w, "tions") || ends_with(w, "ments") ||
                             ends_with(w, "ities") || ends_with(w, "nesses"))) {
          tag = "NNS";
        } else if (n > 4 && (ends_with(w, "ous") || ends_with(w, "ful") ||
                             ends_with(w, "ive") || ends_with(w, "able") ||
                             ends_with(w, "ible") || ends_with(w, "al") ||
                             ends_with(w, "ic") || ends_with(w, "less") ||
                             ends_with(w, "ish"))) {
          tag = "JJ";
        } else if (n > 4 && ends_with(w, "est")) {
          tag = "JJS";
        } else if (n > 3 && ends_with(w, "s") && !ends_with(w, "ss")) {
          const std::string stem = w.substr(0, n - 1);
          auto lexical = lex_.tagger_lexicon.find(stem);
          const bool verb_stem =
              lexical != lex_.tagger_lexicon.end() && lexical->second == "VB";
          if ((prev_tag == "PRP" && (prev_word == "he" || prev_word == "she" ||
                                     prev_word == "it")) ||
              ((prev_tag == "NN" || prev_tag == "NNP") && verb_stem)) {
            tag = "VBZ";
          } else {
            tag = "NNS";
          }
        } else if (prev_tag == "MD" || prev_tag == "TO") {
          tag = "VB";
        } else if (prev_tag == "PRP" && !nominal_before) {
          tag = "VBP";
        } else {
          tag = "NN";
        }
        break;
      }
    }
    tags[i] = tag;
    prev_tag = tag;
    prev_word = t.kind == TokenKind::kPunct ? std::string() : clitic_stem(t.lower);
  }
  return tags;
}

const std::vector<std::string>& feature_inventory() {
  static const std::vector<std::string> kNames = {
      "ats", "links", "hashtags", "emojis", "length_chars", "offensive",
      "misspelled", "upper_lower_ratio",
      "pastVerbs", "presVerbs", "placeAdverbials", "timeAdverbials",
      "1persProns", "2persProns", "3persProns", "impersProns",
      "demonstrProns", "indefProns", "doAsProVerb", "whQuestions",
      "nominalizations", "Nouns", "beAsMain", "WHclauses", "preposn",
      "attrAdj", "ADV", "TTR", "wordLength", "conjuncts", "generalEmphatics",
      "discoursePart", "publicVerbs", "privateVerbs", "possibModals",
      "predicModals", "contractions", "thatDeletion", "analNegn",
      "swear_any", "slang_any"};
  return kNames;
}

namespace {

// Greedy longest-first phrase count over the word sequence.
std::size_t count_phrases(const std::vector<const LingToken*>& words,
                          const std::vector<Phrase>& phrases) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < words.size()) {
    std::size_t matched = 0;
    for (const auto& p : phrases) {
      if (i + p.size() > words.size()) continue;
      bool ok = true;
      for (std::size_t k = 0; k < p.size() && ok; ++k) {
        ok = words[i + k]->lower == p[k];
      }
      if (ok) {
        matched = p.size();
        break;
      }
    }
    if (matched > 0) {
      ++count;
      i += matched;
    } else {
      ++i;
    }
  }
  return count;
}

}  // namespace

FeatureVector extract_features_tagged(std::string_view text,
                                      const std::vector<LingToken>& tokens,
                                      const std::vector<std::string>& tags,
                                      const Lexicons& lex,
                                      std::string record_id) {
  if (trim(text).empty()) throw InvalidArgument("cannot extract features from empty text");
  if (tokens.size() != tags.size()) {
    throw InvalidArgument("token and tag counts differ");
  }
  FeatureVector fv;
  fv.record_id = std::move(record_id);

  // Word-level view: every non-punctuation token, with its index.
  std::vector<std::size_t> idx;
  std::vector<const LingToken*> words;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::kPunct) {
      idx.push_back(i);
      words.push_back(&tokens[i]);
    }
  }
  const std::size_t n = words.size();
  fv.n_tokens = n;

  auto sentence_start = [&](std::size_t i) {
    return i == 0 || is_sentence_punct(tokens[i - 1]);
  };
  auto next_token = [&](std::size_t i) -> const LingToken* {
    return i + 1 < tokens.size() ? &tokens[i + 1] : nullptr;
  };
  auto next_word = [&](std::size_t w) -> std::size_t {  // index into words
    return w + 1 < n ? w + 1 : n;
  };

  std::map<std::string, double> c;
  for (const auto& name : feature_inventory()) c[name] = 0.0;

  bool swear = false;
  bool slang = false;
  std::size_t alpha_words = 0;
  std::size_t alpha_len = 0;
  WordSet distinct;

  for (std::size_t w = 0; w < n; ++w) {
    const std::size_t i = idx[w];
    const LingToken& t = *words[w];
    const std::string& tag = tags[i];
    const std::string base = clitic_stem(t.lower);
    const std::string clitic = clitic_of(t.lower);
    const std::string prev_tag = i > 0 ? tags[i - 1] : ".";
    distinct.insert(t.lower);

    switch (t.kind) {
      case TokenKind::kMention: c["ats"] += 1; continue;
      case TokenKind::kHashtag: c["hashtags"] += 1; continue;
      case TokenKind::kUrl: c["links"] += 1; continue;
      case TokenKind::kEmoji:
      case TokenKind::kNumber:
      case TokenKind::kPunct:
        continue;
      case TokenKind::kWord:
        break;
    }

    if (lex.offensive.contains(t.lower) || lex.offensive.contains(base)) c["offensive"] += 1;
    if (lex.profanity.contains(t.lower) || lex.profanity.contains(base)) swear = true;
    if (lex.slang.contains(t.lower)) slang = true;
    if (is_alpha_word(t.lower)) {
      if (!lex.dictionary.contains(t.lower) && !lex.dictionary.contains(base)) {
        c["misspelled"] += 1;
      }
      ++alpha_words;
      alpha_len += decode32(t.text).size();
    }

    if (tag == "VBD") c["pastVerbs"] += 1;
    if (tag == "VBP" || tag == "VBZ") c["presVerbs"] += 1;
    if (lex.place_adverbials.contains(t.lower)) c["placeAdverbials"] += 1;
    if (lex.time_adverbials.contains(t.lower)) c["timeAdverbials"] += 1;
    if (lex.first_person.contains(base)) c["1persProns"] += 1;
    if (lex.second_person.contains(base)) c["2persProns"] += 1;
    if (lex.third_person.contains(base)) c["3persProns"] += 1;
    if (lex.impersonal.contains(base)) c["impersProns"] += 1;
    if (lex.indefinite.contains(base)) c["indefProns"] += 1;

    if (lex.demonstrative.contains(base)) {
      const LingToken* nt = next_token(i);
      const bool pronoun =
          !clitic.empty() || nt == nullptr || nt->kind == TokenKind::kPunct ||
          is_verb_tag(tags[i + 1]) || tags[i + 1] == "MD" ||
          lex.wh_words.contains(nt->lower) || nt->lower == "and";
      if (pronoun) c["demonstrProns"] += 1;
    }

    if (do_forms().contains(base)) {
      std::size_t k = next_word(w);
      while (k < n && (starts_with(tags[idx[k]], "RB") || words[k]->lower == "not")) {
        k = next_word(k);
      }
      const bool aux = k < n && is_verb_tag(tags[idx[k]]);
      const bool question =
          sentence_start(i) ||
          (w > 0 && lex.wh_words.contains(words[w - 1]->lower));
      if (!aux && !question) c["doAsProVerb"] += 1;
    }

    if (sentence_start(i) && lex.wh_words.contains(base) && base != "however" &&
        base != "whether") {
      const bool clitic_aux = clitic == "'s" || clitic == "'re";
      const std::size_t k = next_word(w);
      if (clitic_aux || (k < n && aux_words().contains(clitic_stem(words[k]->lower)))) {
        c["whQuestions"] += 1;
      }
    }

    const bool nominal = is_nominalization(t);
    if (nominal) c["nominalizations"] += 1;
    if (is_noun_tag(tag) && !nominal && t.kind == TokenKind::kWord) c["Nouns"] += 1;

    const bool be_clitic = clitic == "'m" || clitic == "'re" ||
                           (clitic == "'s" && s_contraction_stems().contains(base));
    if (be_forms().contains(base) || be_clitic) {
      if (i + 1 < tokens.size() && tokens[i + 1].kind != TokenKind::kPunct) {
        const std::string& nt = tags[i + 1];
        if (nt == "DT" || nt == "PRP$" || nt == "IN" || is_adj_tag(nt) ||
            nt == "CD") {
          c["beAsMain"] += 1;
        }
      }
    }

    const bool det_before = prev_tag == "DT" || prev_tag == "PRP$";
    const bool comm_verb = !det_before && (verb_in(lex.public_verbs, t.lower) ||
                                           verb_in(lex.private_verbs, t.lower) ||
                                           verb_in(lex.suasive_verbs, t.lower));
    if (comm_verb && i + 1 < tokens.size() &&
        tokens[i + 1].kind == TokenKind::kWord) {
      const LingToken& nt = tokens[i + 1];
      const std::string nb = clitic_stem(nt.lower);
      if (lex.wh_words.contains(nt.lower) && nt.lower != "however") {
        c["WHclauses"] += 1;
      }
      if (nb == "i" || nb == "we" || nb == "he" || nb == "she" || nb == "they") {
        c["thatDeletion"] += 1;
      } else if (nb == "you" || nb == "it" || nb == "this" || nb == "these" ||
                 nb == "those") {
        const bool finite_next =
            !clitic_of(nt.lower).empty() ||
            (i + 2 < tokens.size() &&
             (is_verb_tag(tags[i + 2]) || tags[i + 2] == "MD"));
        if (finite_next) c["thatDeletion"] += 1;
      }
    }

    if (lex.prepositions.contains(t.lower)) c["preposn"] += 1;
    if (is_adj_tag(tag) && i + 1 < tokens.size() &&
        tokens[i + 1].kind != TokenKind::kPunct &&
        (is_adj_tag(tags[i + 1]) || is_noun_tag(tags[i + 1]))) {
      c["attrAdj"] += 1;
    }
    if (starts_with(tag, "RB")) c["ADV"] += 1;
    if ((t.lower == "so" || t.lower == "real") && i + 1 < tokens.size() &&
        is_adj_tag(tags[i + 1])) {
      c["generalEmphatics"] += 1;
    }
    if (sentence_start(i) && lex.discourse_particles.contains(t.lower)) {
      c["discoursePart"] += 1;
    }
    if (!det_before && verb_in(lex.public_verbs, t.lower)) c["publicVerbs"] += 1;
    if (!det_before && verb_in(lex.private_verbs, t.lower)) c["privateVerbs"] += 1;
    if (lex.possibility_modals.contains(t.lower)) c["possibModals"] += 1;
    if (lex.prediction_modals.contains(t.lower) || clitic == "'ll" || clitic == "'d") {
      c["predicModals"] += 1;
    }
    if (t.lower.find('\'') != std::string::npos &&
        (clitic == "n't" || clitic == "'re" || clitic == "'ve" ||
         clitic == "'ll" || clitic == "'d" || clitic == "'m" ||
         (clitic == "'s" && s_contraction_stems().contains(base)))) {
      c["contractions"] += 1;
    }
    if (t.lower == "not" || t.lower == "cannot" || clitic == "n't") {
      c["analNegn"] += 1;
    }
  }
  c["conjuncts"] = static_cast<double>(count_phrases(words, lex.conjuncts));
  c["generalEmphatics"] += static_cast<double>(count_phrases(words, lex.emphatics));
  c["emojis"] = static_cast<double>(count_emoji(text));

  const std::u32string cps = decode32(text);
  std::size_t upper = 0;
  std::size_t lower = 0;
  for (char32_t ch : cps) {
    if (ch >= 'A' && ch <= 'Z') ++upper;
    if (ch >= 'a' && ch <= 'z') ++lower;
  }

  const double denom = static_cast<double>(std::max<std::size_t>(1, n));
  for (const auto& name : feature_inventory()) {
    if (name == "length_chars" || name == "upper_lower_ratio" || name == "TTR" ||
        name == "wordLength" || name == "swear_any" || name == "slang_any") {
      continue;
    }
    fv.counts[name] = c[name];
    fv.values[name] = c[name] / denom;
  }
  fv.values["length_chars"] = static_cast<double>(cps.size());
  fv.values["upper_lower_ratio"] =
      static_cast<double>(upper) / static_cast<double>(std::max<std::size_t>(1, lower));
  fv.values["TTR"] = n == 0 ? 1.0
                            : static_cast<double>(distinct.size()) /
                                  static_cast<double>(n);
  fv.values["wordLength"] =
      alpha_words == 0 ? 0.0
                       : static_cast<double>(alpha_len) /
                             static_cast<double>(alpha_words);
  fv.values["swear_any"] = swear ? 1.0 : 0.0;
  fv.values["slang_any"] = slang ? 1.0 : 0.0;
  return fv;
}

FeatureVector extract_features(std::string_view text, const Lexicons& lexicons,
                               const Tagger& tagger, std::string record_id) {
  if (trim(text).empty()) throw InvalidArgument("cannot extract features from empty text");
  const std::vector<LingToken> tokens = tokenize_for_features(text);
  const std::vector<std::string> tags = tagger.tag(tokens);
  return extract_features_tagged(text, tokens, tags, lexicons,
                                 std::move(record_id));
}

std::vector<FeatureVector> extract_corpus_features(
    const std::vector<TextRecord>& records, const Lexicons& lexicons,
    const Tagger& tagger, std::size_t max_parallel) {
  std::vector<FeatureVector> out(records.size());
  parallel_for(records.size(), max_parallel, [&](std::size_t i) {
    const TextRecord& r = records[i];
    auto pos = r.meta.find("pos");
    if (pos != r.meta.end()) {
      std::vector<LingToken> tokens;
      std::vector<std::string> tags;
      parse_pretagged(pos->second, tokens, tags);
      out[i] = extract_features_tagged(r.text, tokens, tags, lexicons, r.id);
    } else {
      out[i] = extract_features(r.text, lexicons, tagger, r.id);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Statistics

MannWhitney mann_whitney(const std::vector<double>& a,
                         const std::vector<double>& b) {
  if (a.empty() || b.empty()) {
    throw InvalidArgument("mann_whitney: both groups need values");
  }
  std::vector<std::pair<double, bool>> pooled;  // (value, in_b)
  pooled.reserve(a.size() + b.size());
  for (double v : a) pooled.emplace_back(v, false);
  for (double v : b) pooled.emplace_back(v, true);
  for (const auto& [v, in_b] : pooled) {
    if (std::isnan(v)) throw InvalidArgument("mann_whitney: NaN value");
  }
  std::sort(pooled.begin(), pooled.end());

  std::uint64_t twice_rank_sum_b = 0;
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    std::uint64_t b_in_group = 0;
    while (j < pooled.size() && pooled[j].first == pooled[i].first) {
      b_in_group += pooled[j].second ? 1 : 0;
      ++j;
    }
    twice_rank_sum_b += b_in_group * (static_cast<std::uint64_t>(i + 1) + j);
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const std::uint64_t nb = b.size();
  const double na_d = static_cast<double>(a.size());
  const double nb_d = static_cast<double>(nb);
  MannWhitney r;
  r.u_b = static_cast<double>(twice_rank_sum_b - nb * (nb + 1)) / 2.0;

  const double nn = na_d + nb_d;
  const double mu = na_d * nb_d / 2.0;
  const double var =
      na_d * nb_d / 12.0 * ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  if (var <= 0.0) {
    r.p_value = 1.0;
    return r;
  }
  const double u = std::max(r.u_b, na_d * nb_d - r.u_b);
  const double z = (u - mu - 0.5) / std::sqrt(var);
  r.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return r;
}

double rank_biserial(double u_b, std::size_t n_a, std::size_t n_b) {
  if (n_a == 0 || n_b == 0) {
    throw InvalidArgument("rank_biserial: group sizes must be positive");
  }
  // (2U - n)/n rather than 2U/n - 1: the numerator is an exact integer, so
  // swapping the groups negates r bit for bit.
  const double n = static_cast<double>(n_a) * static_cast<double>(n_b);
  return (2.0 * u_b - n) / n;
}

std::string_view to_string(EffectBand b) {
  switch (b) {
    case EffectBand::kNone: return "none";
    case EffectBand::kSmall: return "small";
    case EffectBand::kMedium: return "medium";
    case EffectBand::kLarge: return "large";
  }
  return "none";
}

EffectBand band(double r) {
  const double a = std::fabs(r);
  if (std::isnan(r) || a > 1.0 + 1e-12) {
    throw InvalidArgument("effect size outside [-1, 1]: " + std::to_string(r));
  }
  if (a >= 0.5) return EffectBand::kLarge;
  if (a >= 0.3) return EffectBand::kMedium;
  if (a >= 0.1) return EffectBand::kSmall;
  return EffectBand::kNone;
}

EffectSizeReport compare_corpora(const std::vector<FeatureVector>& human,
                                 const std::vector<FeatureVector>& ai,
                                 const std::vector<std::string>& features) {
  if (human.empty() || ai.empty()) {
    throw InvalidArgument("compare_corpora: both corpora need records");
  }
  auto column = [](const std::vector<FeatureVector>& group,
                   const std::string& feature) {
    std::vector<double> v;
    v.reserve(group.size());
    for (const auto& fv : group) {
      auto it = fv.values.find(feature);
      if (it == fv.values.end()) {
        throw InvalidArgument("feature '" + feature + "' missing for record '" +
                              fv.record_id + "'");
      }
      v.push_back(it->second);
    }
    return v;
  };
  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };

  EffectSizeReport report;
  report.n_human = human.size();
  report.n_ai = ai.size();
  for (const auto& f : features) {
    const std::vector<double> a = column(human, f);
    const std::vector<double> b = column(ai, f);
    const MannWhitney mw = mann_whitney(a, b);
    EffectSizeRow row;
    row.feature = f;
    row.mean_a = mean(a);
    row.mean_b = mean(b);
    row.u_statistic = mw.u_b;
    row.r = rank_biserial(mw.u_b, a.size(), b.size());
    row.p_value = mw.p_value;
    row.band = band(row.r);
    report.rows.push_back(std::move(row));
  }
  report.metadata = {
      {"normalization", "per_token"},
      {"token_definition", "whitespace chunks minus punctuation"},
      {"u_statistic", "U_ai: pairs with ai > human, ties 0.5"},
      {"p_value", "two-sided normal approximation, tie-corrected, continuity 0.5"},
      {"band_thresholds", {0.1, 0.3, 0.5}},
      {"n_human", report.n_human},
      {"n_ai", report.n_ai}};
  return report;
}

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  std::string s = buf;
  if (s.size() > 1 && s[0] == '-' &&
      s.find_first_not_of("-0.") == std::string::npos) {
    s.erase(0, 1);  // no "-0.000000"
  }
  return s;
}

}  // namespace

std::string to_csv(const EffectSizeReport& report) {
  std::ostringstream out;
  out << "feature,mean_human,mean_ai,U,R,p,band\n";
  for (const auto& r : report.rows) {
    out << r.feature << ',' << fmt("%.6g", r.mean_a) << ','
        << fmt("%.6g", r.mean_b) << ',' << fmt("%.1f", r.u_statistic) << ','
        << fmt("%.6f", r.r) << ',' << fmt("%.6g", r.p_value) << ','
        << to_string(r.band) << '\n';
  }
  return out.str();
}

std::string to_markdown(const EffectSizeReport& report) {
  std::ostringstream out;
  out << "| Feature | Human (mean) | AI (mean) | R | effect |\n"
      << "|---|---|---|---|---|\n";
  for (const auto& r : report.rows) {
    out << "| " << r.feature << " | " << fmt("%.2g", r.mean_a) << " | "
        << fmt("%.2g", r.mean_b) << " | " << fmt("%.2g", r.r) << " | "
        << to_string(r.band) << " |\n";
  }
  out << "\nn_human = " << report.n_human << ", n_ai = " << report.n_ai
      << "; rates are per token. Positive R: higher in AI text.\n";
  return out.str();
}

}  // namespace aigt

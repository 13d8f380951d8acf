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

#include <algorithm>
#include <cmath>
#include <random>

#include "aigt/error.h"
#include "aigt/text_util.h"

namespace aigt {

namespace {

constexpr std::uint64_t kContextSalt = 0xD1B54A32D192ED03ULL;
constexpr std::uint64_t kTokenSalt = 0x8CB92BA72F3D8DD7ULL;

std::uint64_t context_hash(std::uint64_t seed, std::span<const int> context,
                           std::size_t window, std::size_t vocab_size) {
  std::uint64_t h = mix64(seed);
  // Left-pad with a BOS id (== vocab_size) so the window is always full.
  for (std::size_t k = window; k > 0; --k) {
    const std::uint64_t tok =
        context.size() >= k
            ? static_cast<std::uint64_t>(context[context.size() - k])
            : static_cast<std::uint64_t>(vocab_size);
    h = mix64(h ^ ((tok + 1) * kContextSalt));
  }
  return h;
}

}  // namespace

ToyLm::ToyLm(ToyLmConfig config) : config_(config) {
  if (config_.vocab_size < 2) {
    throw InvalidArgument("toy LM vocab_size must be >= 2");
  }
}

std::vector<double> ToyLm::distribution(std::span<const int> context) const {
  const std::size_t v = config_.vocab_size;
  const std::uint64_t h =
      context_hash(config_.seed, context, config_.context_window, v);
  std::vector<double> out(v, 0.0);
  if (config_.deterministic) {
    std::size_t best = 0;
    std::uint64_t best_key = 0;
    for (std::size_t t = 0; t < v; ++t) {
      const std::uint64_t key = mix64(h ^ ((t + 1) * kTokenSalt));
      if (t == 0 || key > best_key) {
        best = t;
        best_key = key;
      }
    }
    out[best] = 1.0;
    return out;
  }
  double max_logit = -INFINITY;
  for (std::size_t t = 0; t < v; ++t) {
    const std::uint64_t key = mix64(h ^ ((t + 1) * kTokenSalt));
    const double u = static_cast<double>(key >> 11) * 0x1.0p-53;
    out[t] = config_.logit_scale * (2.0 * u - 1.0);
    max_logit = std::max(max_logit, out[t]);
  }
  double sum = 0.0;
  for (double& x : out) {
    x = std::exp(x - max_logit);
    sum += x;
  }
  for (double& x : out) x /= sum;
  return out;
}

std::vector<int> ToyLm::sample(std::size_t length,
                               std::mt19937_64& rng) const {
  std::vector<int> tokens;
  tokens.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    const auto probs = distribution(tokens);
    const double u = uniform_unit(rng);
    double acc = 0.0;
    std::size_t pick = probs.size() - 1;
    for (std::size_t t = 0; t < probs.size(); ++t) {
      acc += probs[t];
      if (u < acc) {
        pick = t;
        break;
      }
    }
    // Never emit a zero-probability token through rounding at the tail.
    while (probs[pick] == 0.0 && pick > 0) --pick;
    tokens.push_back(static_cast<int>(pick));
  }
  return tokens;
}

std::vector<double> toy_lm_distribution(std::span<const int> context,
                                        std::uint64_t seed,
                                        std::size_t vocab_size,
                                        bool deterministic) {
  ToyLmConfig config;
  config.seed = seed;
  config.vocab_size = vocab_size;
  config.deterministic = deterministic;
  return ToyLm(config).distribution(context);
}

// ---------------------------------------------------------------------------

namespace {

constexpr const char* kToyWords[] = {
    "the",   "vote",  "now",   "we",    "people", "climate", "rights", "war",
    "news",  "truth", "today", "never", "always", "love",    "hate",   "fake",
    "real",  "time",  "world", "free",  "stop",   "change",  "think",  "know",
    "just",  "so",    "very",  "good",  "bad",    "why",     "how",    "what",
    "data",  "march", "women", "men",   "kids",   "border",  "brexit", "covid",
    "maga",  "life",  "choice","act",   "plan",   "help",    "fight",  "home",
    "state", "money", "jobs",  "tax",   "power",  "voice",   "hope",   "fear",
    "lies",  "facts", "proud", "sad",   "angry",  "tired",   "ready",  "done"};

}  // namespace

ToyTokenizer::ToyTokenizer(std::size_t vocab_size) {
  if (vocab_size < 2) throw InvalidArgument("tokenizer vocab_size must be >= 2");
  pieces_.reserve(vocab_size);
  constexpr std::size_t kNamed = std::size(kToyWords);
  for (std::size_t i = 0; i < vocab_size; ++i) {
    pieces_.push_back(i < kNamed ? std::string(kToyWords[i])
                                 : "w" + std::to_string(i));
  }
  id_ = "toy-ws-v" + std::to_string(vocab_size);
}

std::vector<int> ToyTokenizer::encode(std::string_view text) const {
  std::vector<int> out;
  for (const auto& word : split_whitespace(text)) {
    auto it = std::find(pieces_.begin(), pieces_.end(), word);
    if (it != pieces_.end()) {
      out.push_back(static_cast<int>(it - pieces_.begin()));
    } else {
      out.push_back(static_cast<int>(fnv1a64(word) % pieces_.size()));
    }
  }
  return out;
}

std::string ToyTokenizer::decode(std::span<const int> tokens) const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += piece(tokens[i]);
  }
  return out;
}

const std::string& ToyTokenizer::piece(int token) const {
  if (token < 0 || static_cast<std::size_t>(token) >= pieces_.size()) {
    throw InvalidArgument("token id out of range");
  }
  return pieces_[static_cast<std::size_t>(token)];
}

ToyBackend::ToyBackend(std::string id, ToyLmConfig config)
    : id_(std::move(id)), lm_(config), tokenizer_(config.vocab_size) {}

StaticDistributionBackend::StaticDistributionBackend(std::string id,
                                                     std::vector<double> probs)
    : id_(std::move(id)), probs_(std::move(probs)), tokenizer_(probs_.size()) {
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0)) throw InvalidArgument("negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InvalidArgument("static distribution must sum to 1");
  }
}

std::vector<TextRecord> make_toy_corpus(const ToyCorpusSpec& spec) {
  if (spec.human.vocab_size != spec.generator.vocab_size) {
    throw InvalidArgument("human and generator toy models need one vocabulary");
  }
  if (spec.min_tokens == 0 || spec.min_tokens > spec.max_tokens) {
    throw InvalidArgument("toy corpus needs 0 < min_tokens <= max_tokens");
  }
  if (spec.generator_name.empty()) {
    throw InvalidArgument("toy corpus needs a generator name");
  }
  const ToyLm human(spec.human);
  const ToyLm generator(spec.generator);
  const ToyTokenizer tokenizer(spec.human.vocab_size);
  std::mt19937_64 human_rng(mix64(spec.seed ^ 0x68756d616eULL));
  std::mt19937_64 ai_rng(mix64(spec.seed ^ fnv1a64(spec.generator_name)));
  const std::uint64_t span = spec.max_tokens - spec.min_tokens + 1;

  std::vector<TextRecord> out;
  out.reserve(2 * spec.pairs);
  for (std::size_t i = 0; i < spec.pairs; ++i) {
    const std::string pair = "p" + std::to_string(i);
    const std::size_t human_len = spec.min_tokens + uniform_below(human_rng, span);
    const std::size_t ai_len = spec.min_tokens + uniform_below(ai_rng, span);

    TextRecord h;
    h.id = "human/" + pair;
    h.label = Label::kHuman;
    h.topic = "toy";
    h.pair_id = pair;
    h.text = tokenizer.decode(human.sample(human_len, human_rng));
    out.push_back(std::move(h));

    TextRecord a;
    a.id = spec.generator_name + "/" + pair;
    a.label = Label::kAi;
    a.topic = "toy";
    a.pair_id = pair;
    a.generator = spec.generator_name;
    a.strategy = Strategy::kPara1;
    a.text = tokenizer.decode(generator.sample(ai_len, ai_rng));
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace aigt

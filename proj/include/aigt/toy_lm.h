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

#ifndef AIGT_TOY_LM_H_
#define AIGT_TOY_LM_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "aigt/measure.h"

namespace aigt {

// Seeded n-gram-style language model over a small vocabulary. Logits are a
// hash of (seed, last `context_window` tokens, candidate token), scaled and
// passed through a softmax, so every distribution is exactly reproducible
// and cheap to enumerate.
class ToyLm {
 public:
  explicit ToyLm(ToyLmConfig config);

  const ToyLmConfig& config() const { return config_; }
  std::size_t vocab_size() const { return config_.vocab_size; }

  std::vector<double> distribution(std::span<const int> context) const;

  // Draws `length` tokens autoregressively.
  std::vector<int> sample(std::size_t length, std::mt19937_64& rng) const;

 private:
  ToyLmConfig config_;
};

// Free-function form of ToyLm::distribution.
std::vector<double> toy_lm_distribution(std::span<const int> context,
                                        std::uint64_t seed,
                                        std::size_t vocab_size,
                                        bool deterministic = false);

// Whitespace tokenizer for toy vocabularies. Token i renders as a fixed
// word; any other word maps to fnv1a(word) mod vocab_size.
class ToyTokenizer {
 public:
  explicit ToyTokenizer(std::size_t vocab_size);

  std::vector<int> encode(std::string_view text) const;
  std::string decode(std::span<const int> tokens) const;
  const std::string& piece(int token) const;
  const std::string& id() const { return id_; }

 private:
  std::vector<std::string> pieces_;
  std::string id_;
};

class ToyBackend : public ExactBackend {
 public:
  ToyBackend(std::string id, ToyLmConfig config);

  const std::string& id() const override { return id_; }
  const std::string& tokenizer_id() const override {
    return tokenizer_.id();
  }
  std::vector<int> tokenize(std::string_view text) const override {
    return tokenizer_.encode(text);
  }
  std::string piece(int token) const override {
    return tokenizer_.piece(token);
  }
  std::vector<double> next_distribution(
      std::span<const int> context) const override {
    return lm_.distribution(context);
  }

  const ToyLm& lm() const { return lm_; }
  const ToyTokenizer& tokenizer() const { return tokenizer_; }

 private:
  std::string id_;
  ToyLm lm_;
  ToyTokenizer tokenizer_;
};

// Returns the same distribution at every position. Handy for hand-checkable
// cases such as p = (1/2, 1/4, 1/4).
class StaticDistributionBackend : public ExactBackend {
 public:
  StaticDistributionBackend(std::string id, std::vector<double> probs);

  const std::string& id() const override { return id_; }
  const std::string& tokenizer_id() const override {
    return tokenizer_.id();
  }
  std::vector<int> tokenize(std::string_view text) const override {
    return tokenizer_.encode(text);
  }
  std::string piece(int token) const override {
    return tokenizer_.piece(token);
  }
  std::vector<double> next_distribution(std::span<const int>) const override {
    return probs_;
  }
  const ToyTokenizer& tokenizer() const { return tokenizer_; }

 private:
  std::string id_;
  std::vector<double> probs_;
  ToyTokenizer tokenizer_;
};

// Paired synthetic corpus: human texts sampled from `human`, AI texts from
// `generator`, lengths uniform in [min_tokens, max_tokens]. The human side
// depends only on (human, pairs, lengths, seed), so corpora built for
// different generators share their human texts.
struct ToyCorpusSpec {
  std::string generator_name;
  ToyLmConfig human;
  ToyLmConfig generator;
  std::size_t pairs = 200;
  std::size_t min_tokens = 16;
  std::size_t max_tokens = 48;
  std::uint64_t seed = 0;
};

std::vector<TextRecord> make_toy_corpus(const ToyCorpusSpec& spec);

}  // namespace aigt

#endif  // AIGT_TOY_LM_H_

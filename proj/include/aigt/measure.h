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

#ifndef AIGT_MEASURE_H_
#define AIGT_MEASURE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aigt/corpus.h"
#include "aigt/http.h"
#include "json.hpp"

namespace aigt {

// All log-probabilities are natural logs.

struct TopKEntry {
  std::string token;
  double logprob = 0.0;

  bool operator==(const TopKEntry&) const = default;
};

// Summary of the measurement model's next-token distribution at one position
// of a text, together with the token that was actually observed there.
struct PositionSummary {
  std::string token;
  double observed_logprob = 0.0;  // <= 0
  std::int64_t rank = 1;          // 1 + #{t : p(t) > p(observed)}
  double dist_entropy = 0.0;      // -sum p log p
  double dist_mean_logprob = 0.0; // sum p log p (== -dist_entropy)
  double dist_second_moment = 0.0;// sum p (log p)^2
  std::optional<std::vector<TopKEntry>> topk;
  bool exact = true;  // computed over the full vocabulary

  double dist_variance() const {
    return dist_second_moment - dist_mean_logprob * dist_mean_logprob;
  }
  bool operator==(const PositionSummary&) const = default;
};

struct ScoreSequence {
  std::string record_id;
  std::string backend_id;
  std::string tokenizer_id;
  std::vector<PositionSummary> tokens;

  bool exact() const;
  bool operator==(const ScoreSequence&) const = default;
};

nlohmann::json to_json(const ScoreSequence& seq);
ScoreSequence sequence_from_json(const nlohmann::json& j);

// Exact summary from a full probability vector. Throws InvalidArgument when
// the observed token has zero probability or the index is out of range.
PositionSummary summarize_distribution(std::span<const double> probs,
                                       std::size_t observed,
                                       std::string token = {});

// The k most probable entries of `probs` (ties broken by lower index).
std::vector<std::pair<std::size_t, double>> top_k_indices(
    std::span<const double> probs, std::size_t k);

enum class TailMode { kUniformTail, kRenormalize };

std::string_view to_string(TailMode mode);
TailMode parse_tail_mode(std::string_view s);

// Approximate summary from an endpoint's top-k alternatives.
//  uniform_tail: the mass 1 - sum(topk) is spread evenly over the
//    vocab_size - k tokens outside the list.
//  renormalize: the top-k list is rescaled to sum to one; no tail.
// An observed token missing from the list gets rank k + 1.
PositionSummary summarize_topk(std::string token, double observed_logprob,
                               std::vector<TopKEntry> topk, TailMode mode,
                               std::size_t vocab_size);

// ---------------------------------------------------------------------------
// Backends

enum class BackendKind { kRemote, kToy };

struct ToyLmConfig {
  std::uint64_t seed = 0;
  std::size_t vocab_size = 16;
  std::size_t context_window = 3;
  bool deterministic = false;
  double logit_scale = 3.0;
};

struct BackendConfig {
  std::string name;
  BackendKind kind = BackendKind::kToy;
  // remote
  std::optional<std::string> endpoint_url;
  std::string model;
  std::string api_key_env;
  int top_k = 5;
  TailMode tail_mode = TailMode::kUniformTail;
  std::size_t vocab_size = 128256;  // tail size for uniform_tail
  std::string tokenizer_id;         // empty: derived from kind
  std::size_t max_parallel = 4;
  RetryPolicy retry;
  // toy
  ToyLmConfig toy;
};

void validate(const BackendConfig& config);
BackendConfig backend_config_from_json(const std::string& name,
                                       const nlohmann::json& j);
nlohmann::json to_json(const BackendConfig& config);

// How a non-exact backend approximates its distributions.
struct TopKApproximation {
  TailMode tail_mode;
  std::size_t vocab_size;
};

class ExactBackend;

class MeasurementBackend {
 public:
  virtual ~MeasurementBackend() = default;
  virtual const std::string& id() const = 0;
  virtual const std::string& tokenizer_id() const = 0;
  // One summary per conditioned token position. Must be thread-safe.
  virtual ScoreSequence score(std::string_view record_id,
                              std::string_view text) = 0;
  virtual std::optional<TopKApproximation> approximation() const {
    return std::nullopt;
  }
  // Non-null when full distributions are available (possibly through a
  // wrapper such as a cache).
  virtual const ExactBackend* as_exact() const { return nullptr; }
};

// A backend that can expose full next-token distributions.
class ExactBackend : public MeasurementBackend {
 public:
  virtual std::vector<int> tokenize(std::string_view text) const = 0;
  virtual std::string piece(int token) const = 0;
  virtual std::vector<double> next_distribution(
      std::span<const int> context) const = 0;

  ScoreSequence score(std::string_view record_id,
                      std::string_view text) override;
  const ExactBackend* as_exact() const override { return this; }
};

// Convenience wrapper: backend.score("", text).
ScoreSequence score_text(std::string_view text, MeasurementBackend& backend);

struct CrossScore {
  ScoreSequence observer;
  ScoreSequence performer;
  // X_i = -sum_t p_performer(t | ctx) log p_observer(t | ctx)
  std::vector<double> cross_entropy;
  bool exact = true;
};

// Throws InvalidArgument when tokenizer ids differ or the two sequences do
// not align token by token.
CrossScore cross_score(std::string_view text, MeasurementBackend& observer,
                       MeasurementBackend& performer);

// Scores every record (bounded parallelism); output order follows input.
std::vector<ScoreSequence> score_records(MeasurementBackend& backend,
                                         const std::vector<TextRecord>& records,
                                         std::size_t max_parallel);

}  // namespace aigt

#endif  // AIGT_MEASURE_H_

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

#ifndef AIGT_BACKENDS_H_
#define AIGT_BACKENDS_H_

#include <atomic>
#include <memory>
#include <string>

#include "aigt/measure.h"

namespace aigt {

// Completions-style endpoint that echoes the prompt with per-token logprobs
// and top-k alternatives (OpenAI legacy completions / vLLM / llama.cpp
// server shape). The first prompt token has no conditional logprob and is
// dropped.
class RemoteBackend : public MeasurementBackend {
 public:
  explicit RemoteBackend(BackendConfig config);

  const std::string& id() const override { return config_.name; }
  const std::string& tokenizer_id() const override { return tokenizer_id_; }
  ScoreSequence score(std::string_view record_id,
                      std::string_view text) override;
  std::optional<TopKApproximation> approximation() const override {
    return TopKApproximation{config_.tail_mode, config_.vocab_size};
  }

  std::size_t requests_sent() const { return requests_.load(); }

  nlohmann::json request_body(std::string_view text) const;
  // Turns an endpoint reply into a sequence; positions whose text_offset lies
  // past the prompt (generated tokens) are ignored.
  ScoreSequence parse_response(const nlohmann::json& response,
                               std::string_view record_id,
                               std::string_view text) const;

 private:
  BackendConfig config_;
  std::string tokenizer_id_;
  std::atomic<std::size_t> requests_{0};
};

std::unique_ptr<MeasurementBackend> make_backend(const BackendConfig& config);

}  // namespace aigt

#endif  // AIGT_BACKENDS_H_

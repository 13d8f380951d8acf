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

#include "aigt/backends.h"

#include <algorithm>

#include "aigt/error.h"
#include "aigt/http.h"
#include "aigt/text_util.h"
#include "aigt/toy_lm.h"

namespace aigt {

using nlohmann::json;

RemoteBackend::RemoteBackend(BackendConfig config)
    : config_(std::move(config)) {
  if (config_.kind != BackendKind::kRemote) {
    throw InvalidArgument("RemoteBackend needs a remote backend config");
  }
  validate(config_);
  tokenizer_id_ = config_.tokenizer_id.empty() ? "remote:" + config_.model
                                               : config_.tokenizer_id;
}

json RemoteBackend::request_body(std::string_view text) const {
  json body;
  body["model"] = config_.model;
  body["prompt"] = std::string(text);
  body["echo"] = true;
  body["logprobs"] = config_.top_k;
  body["max_tokens"] = 1;
  body["temperature"] = 0.0;
  return body;
}

ScoreSequence RemoteBackend::parse_response(const json& response,
                                            std::string_view record_id,
                                            std::string_view text) const {
  ScoreSequence seq;
  seq.record_id = std::string(record_id);
  seq.backend_id = config_.name;
  seq.tokenizer_id = tokenizer_id_;
  try {
    const json& lp = response.at("choices").at(0).at("logprobs");
    const json& tokens = lp.at("tokens");
    const json& token_logprobs = lp.at("token_logprobs");
    const json* top = lp.contains("top_logprobs") ? &lp["top_logprobs"] : nullptr;
    const json* offsets = lp.contains("text_offset") ? &lp["text_offset"] : nullptr;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (offsets != nullptr && i < offsets->size() &&
          (*offsets)[i].get<std::size_t>() >= text.size()) {
        break;
      }
      if (i >= token_logprobs.size() || token_logprobs[i].is_null()) continue;
      std::vector<TopKEntry> topk;
      if (top != nullptr && i < top->size() && (*top)[i].is_object()) {
        for (const auto& [tok, v] : (*top)[i].items()) {
          topk.push_back({tok, v.get<double>()});
        }
      }
      // Stable order regardless of the server's map ordering.
      std::sort(topk.begin(), topk.end(),
                [](const TopKEntry& a, const TopKEntry& b) {
                  return a.logprob != b.logprob ? a.logprob > b.logprob
                                                : a.token < b.token;
                });
      const std::string token = tokens[i].get<std::string>();
      const double observed = token_logprobs[i].get<double>();
      if (topk.empty()) topk.push_back({token, observed});
      seq.tokens.push_back(summarize_topk(token, observed, std::move(topk),
                                          config_.tail_mode,
                                          config_.vocab_size));
    }
  } catch (const json::exception& e) {
    throw RemoteError(std::string("unexpected logprobs response: ") + e.what());
  }
  if (seq.tokens.empty()) {
    throw RemoteError("endpoint returned no scorable prompt tokens");
  }
  return seq;
}

ScoreSequence RemoteBackend::score(std::string_view record_id,
                                   std::string_view text) {
  if (trim(text).empty()) throw InvalidArgument("cannot score empty text");
  HeaderList headers;
  add_bearer_from_env(headers, config_.api_key_env);
  ++requests_;
  const json response =
      post_json(*config_.endpoint_url, request_body(text), headers,
                config_.retry);
  return parse_response(response, record_id, text);
}

std::unique_ptr<MeasurementBackend> make_backend(const BackendConfig& config) {
  validate(config);
  if (config.kind == BackendKind::kToy) {
    return std::make_unique<ToyBackend>(config.name, config.toy);
  }
  return std::make_unique<RemoteBackend>(config);
}

}  // namespace aigt

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

#include "aigt/chat_client.h"

#include "aigt/error.h"

namespace aigt {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "";
}

Role parse_role(std::string_view s) {
  if (s == "system") return Role::kSystem;
  if (s == "user") return Role::kUser;
  if (s == "assistant") return Role::kAssistant;
  throw InvalidArgument("unknown chat role '" + std::string(s) + "'");
}

nlohmann::json HttpChatClient::request_body(
    const std::vector<ChatMessage>& messages,
    const GenerationOptions& options) {
  nlohmann::json body;
  body["model"] = options.model;
  body["temperature"] = options.temperature;
  body["max_tokens"] = options.max_tokens;
  if (options.top_p) body["top_p"] = *options.top_p;
  auto& msgs = body["messages"] = nlohmann::json::array();
  for (const auto& m : messages) {
    msgs.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  return body;
}

std::string HttpChatClient::complete(const std::vector<ChatMessage>& messages,
                                     const GenerationOptions& options) {
  HeaderList headers;
  add_bearer_from_env(headers, config_.api_key_env);
  const auto response =
      post_json(config_.endpoint_url, request_body(messages, options), headers,
                config_.retry, config_.timeout_seconds);
  try {
    return response.at("choices").at(0).at("message").at("content")
        .get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw RemoteError("chat response has no choices[0].message.content");
  }
}

}  // namespace aigt

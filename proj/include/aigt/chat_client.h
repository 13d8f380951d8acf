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

#ifndef AIGT_CHAT_CLIENT_H_
#define AIGT_CHAT_CLIENT_H_

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aigt/http.h"
#include "json.hpp"

namespace aigt {

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role);
Role parse_role(std::string_view s);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

// Decoding parameters passed through to the generator. Defaults are ours;
// nothing here is a published setting.
struct GenerationOptions {
  std::string model;
  double temperature = 1.0;
  int max_tokens = 512;
  std::optional<double> top_p;
};

// A chat model. Implementations must be safe to call from several threads at
// once; generation campaigns issue bounded-parallel requests.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  // Returns the assistant reply. Throws on failure.
  virtual std::string complete(const std::vector<ChatMessage>& messages,
                               const GenerationOptions& options) = 0;
};

// OpenAI-compatible POST /v1/chat/completions client.
class HttpChatClient : public ChatClient {
 public:
  struct Config {
    std::string endpoint_url;  // full URL of the chat/completions route
    std::string api_key_env;
    RetryPolicy retry;
    int timeout_seconds = 120;
  };

  explicit HttpChatClient(Config config) : config_(std::move(config)) {}

  std::string complete(const std::vector<ChatMessage>& messages,
                       const GenerationOptions& options) override;

  // Request body sent for `messages`; exposed for dry runs and tests.
  static nlohmann::json request_body(const std::vector<ChatMessage>& messages,
                                     const GenerationOptions& options);

 private:
  Config config_;
};

// Adapts a callable; mostly for tests and scripting.
class FunctionChatClient : public ChatClient {
 public:
  using Fn = std::function<std::string(const std::vector<ChatMessage>&,
                                       const GenerationOptions&)>;
  explicit FunctionChatClient(Fn fn) : fn_(std::move(fn)) {}
  std::string complete(const std::vector<ChatMessage>& messages,
                       const GenerationOptions& options) override {
    return fn_(messages, options);
  }

 private:
  Fn fn_;
};

}  // namespace aigt

#endif  // AIGT_CHAT_CLIENT_H_

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

#include "aigt/http.h"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "aigt/error.h"

#include "httplib.h"

namespace aigt {

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl parse_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw InvalidArgument("URL without scheme: " + std::string(url));
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string_view::npos) {
    return {std::string(url), "/"};
  }
  return {std::string(url.substr(0, path_start)),
          std::string(url.substr(path_start))};
}

bool retryable(int status) { return status == 429 || status >= 500; }

}  // namespace

nlohmann::json post_json(std::string_view url, const nlohmann::json& body,
                         const HeaderList& headers, const RetryPolicy& retry,
                         int timeout_seconds) {
  const ParsedUrl target = parse_url(url);
  httplib::Headers hdrs;
  for (const auto& [k, v] : headers) hdrs.emplace(k, v);
  const std::string payload = body.dump();
  const int attempts = std::max(1, retry.max_attempts);

  std::string last_error;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0 && retry.base_backoff_ms > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(retry.base_backoff_ms << (attempt - 1)));
    }
    httplib::Client client(target.origin);
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    client.set_write_timeout(timeout_seconds, 0);
    auto res = client.Post(target.path, hdrs, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) {
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        throw RemoteError("invalid JSON from " + std::string(url) + ": " +
                          e.what());
      }
    }
    last_error = "HTTP " + std::to_string(res->status) + ": " +
                 res->body.substr(0, 200);
    if (!retryable(res->status)) break;
  }
  throw RemoteError("POST " + std::string(url) + " failed: " + last_error);
}

void add_bearer_from_env(HeaderList& headers, std::string_view env_name) {
  if (env_name.empty()) return;
  const char* key = std::getenv(std::string(env_name).c_str());
  if (key != nullptr && *key != '\0') {
    headers.emplace_back("Authorization", std::string("Bearer ") + key);
  }
}

}  // namespace aigt

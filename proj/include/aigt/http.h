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

#ifndef AIGT_HTTP_H_
#define AIGT_HTTP_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

namespace aigt {

struct RetryPolicy {
  int max_attempts = 3;
  int base_backoff_ms = 250;  // doubled after each failed attempt
};

using HeaderList = std::vector<std::pair<std::string, std::string>>;

// POSTs `body` as JSON to `url` ("http://host:port/path" or https) and
// returns the parsed JSON response. Connection failures, HTTP 429 and 5xx
// are retried with exponential backoff; other 4xx fail immediately. Throws
// RemoteError once attempts are exhausted.
nlohmann::json post_json(std::string_view url, const nlohmann::json& body,
                         const HeaderList& headers, const RetryPolicy& retry,
                         int timeout_seconds = 60);

// Adds "Authorization: Bearer <key>" when the named environment variable is
// set and non-empty.
void add_bearer_from_env(HeaderList& headers, std::string_view env_name);

}  // namespace aigt

#endif  // AIGT_HTTP_H_

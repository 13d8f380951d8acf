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

#ifndef AIGT_CLI_H_
#define AIGT_CLI_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aigt/chat_client.h"
#include "aigt/detect.h"
#include "aigt/evalharness.h"
#include "aigt/measure.h"
#include "json.hpp"

namespace aigt {

struct DatasetEntry {
  std::string id;
  std::filesystem::path path;
};

// Parsed run configuration. Relative paths are resolved against the
// directory of the config file.
struct RunConfig {
  std::filesystem::path base_dir;
  std::uint64_t seed = 0;
  std::map<std::string, BackendConfig> backends;
  std::map<std::string, BlackboxConfig> classifiers;
  std::optional<HttpChatClient::Config> chat;
  GenerationOptions generation;
  std::vector<std::string> detectors;
  std::vector<DatasetEntry> datasets;
  Scenario scenario = Scenario::kIdealized;
  double target_fpr = 0.01;
  std::filesystem::path cache_dir;
  std::filesystem::path report_dir;
  std::filesystem::path tag_condition_path;
  std::filesystem::path lexicon_dir;
  std::filesystem::path refusal_lexicon_path;
  // Binoculars observer backend -> performer backend.
  std::map<std::string, std::string> binoculars;
  // Dataset id -> the backend of the model that generated it.
  std::map<std::string, std::string> own_backend;
  std::string matrix_layout = "cross";  // or "own"
  std::vector<std::string> matrix_backends;  // empty: every backend
  std::size_t train_per_class = 6000;
  std::size_t parallel = 4;

  nlohmann::json raw;   // the JSON the config was parsed from
  std::string sha256;   // of raw.dump()
};

RunConfig run_config_from_json(const nlohmann::json& j,
                               const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// Throws InvalidArgument naming the first referenced path that is missing.
void check_paths(const RunConfig& config);

// Entry point of the aigt binary. Returns 0 on success, 1 when the command
// finished but surfaced errors, 2 on a fatal error.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace aigt

#endif  // AIGT_CLI_H_

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

#ifndef AIGT_SCORE_CACHE_H_
#define AIGT_SCORE_CACHE_H_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>

#include "aigt/measure.h"

namespace aigt {

// SHA-256 of the UTF-8 bytes; the cache key, so duplicate texts score once.
std::string text_hash(std::string_view text);

// Append-only JSONL store of score sequences keyed by (backend_id,
// text_sha256). Each line:
//   {"backend_id", "text_sha256", "sequence": <ScoreSequence JSON>}
// Corrupt lines are skipped on load and counted. Writes are serialized.
class ScoreCache {
 public:
  // In-memory only.
  ScoreCache() = default;
  // Loads `store_path` if it exists; new entries are appended to it.
  explicit ScoreCache(std::filesystem::path store_path);

  std::optional<ScoreSequence> lookup(std::string_view text_hash,
                                      std::string_view backend_id) const;
  // Keyed by sequence.backend_id.
  void store(const ScoreSequence& sequence, std::string_view text);
  void store(std::string_view backend_key, const ScoreSequence& sequence,
             std::string_view text);

  std::size_t size() const;
  std::size_t skipped_lines() const { return skipped_lines_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  using Key = std::pair<std::string, std::string>;  // backend, hash

  std::filesystem::path path_;
  std::map<Key, ScoreSequence> entries_;
  std::size_t skipped_lines_ = 0;
  mutable std::shared_mutex mu_;
  std::ofstream out_;
};

// Serves scores from a cache and only calls the wrapped backend on a miss.
// `cache_key` defaults to the backend id; callers that rename or reconfigure
// backends should pass something that changes with the configuration.
class CachedBackend : public MeasurementBackend {
 public:
  CachedBackend(std::shared_ptr<MeasurementBackend> inner,
                std::shared_ptr<ScoreCache> cache, std::string cache_key = {});

  const std::string& id() const override { return inner_->id(); }
  const std::string& tokenizer_id() const override {
    return inner_->tokenizer_id();
  }
  ScoreSequence score(std::string_view record_id,
                      std::string_view text) override;
  std::optional<TopKApproximation> approximation() const override {
    return inner_->approximation();
  }
  const ExactBackend* as_exact() const override { return inner_->as_exact(); }

  std::size_t misses() const { return misses_.load(); }
  std::size_t hits() const { return hits_.load(); }

 private:
  std::shared_ptr<MeasurementBackend> inner_;
  std::shared_ptr<ScoreCache> cache_;
  std::string key_;
  std::atomic<std::size_t> misses_{0};
  std::atomic<std::size_t> hits_{0};
};

}  // namespace aigt

#endif  // AIGT_SCORE_CACHE_H_

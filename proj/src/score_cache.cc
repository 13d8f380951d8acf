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

#include "aigt/score_cache.h"

#include <iostream>

#include "aigt/error.h"
#include "aigt/text_util.h"

namespace aigt {

using nlohmann::json;

std::string text_hash(std::string_view text) { return sha256_hex(text); }

ScoreCache::ScoreCache(std::filesystem::path store_path)
    : path_(std::move(store_path)) {
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_, std::ios::binary);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      try {
        const json j = json::parse(line);
        ScoreSequence seq = sequence_from_json(j.at("sequence"));
        Key key{j.at("backend_id").get<std::string>(),
                j.at("text_sha256").get<std::string>()};
        entries_.insert_or_assign(std::move(key), std::move(seq));
      } catch (const std::exception& e) {
        ++skipped_lines_;
        std::cerr << "warning: score cache " << path_.string() << " line "
                  << lineno << " skipped: " << e.what() << '\n';
      }
    }
  } else if (path_.has_parent_path()) {
    std::filesystem::create_directories(path_.parent_path());
  }
  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw Error("cannot open score cache " + path_.string());
}

std::optional<ScoreSequence> ScoreCache::lookup(
    std::string_view hash, std::string_view backend_id) const {
  std::shared_lock lock(mu_);
  auto it = entries_.find(Key{std::string(backend_id), std::string(hash)});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ScoreCache::store(const ScoreSequence& sequence, std::string_view text) {
  store(sequence.backend_id, sequence, text);
}

void ScoreCache::store(std::string_view backend_key,
                       const ScoreSequence& sequence, std::string_view text) {
  Key key{std::string(backend_key), text_hash(text)};
  std::unique_lock lock(mu_);
  if (entries_.contains(key)) return;
  if (out_.is_open()) {
    json line;
    line["backend_id"] = key.first;
    line["text_sha256"] = key.second;
    json seq = to_json(sequence);
    seq.erase("record_id");
    line["sequence"] = std::move(seq);
    out_ << line.dump() << '\n';
    out_.flush();
  }
  ScoreSequence stored = sequence;
  stored.record_id.clear();
  entries_.emplace(std::move(key), std::move(stored));
}

std::size_t ScoreCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

CachedBackend::CachedBackend(std::shared_ptr<MeasurementBackend> inner,
                             std::shared_ptr<ScoreCache> cache,
                             std::string cache_key)
    : inner_(std::move(inner)), cache_(std::move(cache)),
      key_(std::move(cache_key)) {
  if (!inner_ || !cache_) throw InvalidArgument("CachedBackend needs inputs");
  if (key_.empty()) key_ = inner_->id();
}

ScoreSequence CachedBackend::score(std::string_view record_id,
                                   std::string_view text) {
  if (auto hit = cache_->lookup(text_hash(text), key_)) {
    ++hits_;
    hit->record_id = std::string(record_id);
    return std::move(*hit);
  }
  ++misses_;
  ScoreSequence seq = inner_->score(record_id, text);
  cache_->store(key_, seq, text);
  return seq;
}

}  // namespace aigt

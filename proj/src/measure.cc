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

#include "aigt/measure.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "aigt/error.h"
#include "aigt/parallel.h"
#include "aigt/text_util.h"

namespace aigt {

using nlohmann::json;

bool ScoreSequence::exact() const {
  return std::all_of(tokens.begin(), tokens.end(),
                     [](const PositionSummary& p) { return p.exact; });
}

namespace {

// JSON has no infinities; encode them as strings.
json number_json(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError("expected a number");
}

}  // namespace

json to_json(const ScoreSequence& seq) {
  json tokens = json::array();
  for (const auto& p : seq.tokens) {
    json t;
    t["token"] = p.token;
    t["observed_logprob"] = number_json(p.observed_logprob);
    t["rank"] = p.rank;
    t["dist_entropy"] = number_json(p.dist_entropy);
    t["dist_mean_logprob"] = number_json(p.dist_mean_logprob);
    t["dist_second_moment"] = number_json(p.dist_second_moment);
    t["exact"] = p.exact;
    if (p.topk) {
      json list = json::array();
      for (const auto& e : *p.topk) {
        list.push_back(json::array({e.token, number_json(e.logprob)}));
      }
      t["topk"] = std::move(list);
    }
    tokens.push_back(std::move(t));
  }
  json j;
  j["record_id"] = seq.record_id;
  j["backend_id"] = seq.backend_id;
  j["tokenizer_id"] = seq.tokenizer_id;
  j["tokens"] = std::move(tokens);
  return j;
}

ScoreSequence sequence_from_json(const json& j) {
  try {
    ScoreSequence seq;
    seq.record_id = j.value("record_id", "");
    seq.backend_id = j.at("backend_id").get<std::string>();
    seq.tokenizer_id = j.at("tokenizer_id").get<std::string>();
    for (const auto& t : j.at("tokens")) {
      PositionSummary p;
      p.token = t.at("token").get<std::string>();
      p.observed_logprob = number_from_json(t.at("observed_logprob"));
      p.rank = t.at("rank").get<std::int64_t>();
      p.dist_entropy = number_from_json(t.at("dist_entropy"));
      p.dist_mean_logprob = number_from_json(t.at("dist_mean_logprob"));
      p.dist_second_moment = number_from_json(t.at("dist_second_moment"));
      p.exact = t.at("exact").get<bool>();
      if (auto it = t.find("topk"); it != t.end()) {
        std::vector<TopKEntry> list;
        for (const auto& e : *it) {
          list.push_back({e.at(0).get<std::string>(), number_from_json(e.at(1))});
        }
        p.topk = std::move(list);
      }
      seq.tokens.push_back(std::move(p));
    }
    return seq;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed score sequence: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

PositionSummary summarize_distribution(std::span<const double> probs,
                                       std::size_t observed,
                                       std::string token) {
  if (observed >= probs.size()) {
    throw InvalidArgument("observed token index out of range");
  }
  const double p_obs = probs[observed];
  if (!(p_obs > 0.0)) {
    throw InvalidArgument("observed token has zero probability");
  }
  PositionSummary s;
  s.token = std::move(token);
  s.observed_logprob = std::log(p_obs);
  double mean = 0.0;
  double second = 0.0;
  std::int64_t greater = 0;
  for (double p : probs) {
    if (p > p_obs) ++greater;
    if (p > 0.0) {
      const double lp = std::log(p);
      mean += p * lp;
      second += p * lp * lp;
    }
  }
  s.rank = greater + 1;
  s.dist_mean_logprob = mean;
  s.dist_entropy = -mean;
  // Guards the variance against rounding below zero on near-flat rows.
  s.dist_second_moment = std::max(second, mean * mean);
  s.exact = true;
  return s;
}

std::vector<std::pair<std::size_t, double>> top_k_indices(
    std::span<const double> probs, std::size_t k) {
  std::vector<std::pair<std::size_t, double>> all;
  all.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) all.emplace_back(i, probs[i]);
  k = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k),
                    all.end(), [](const auto& a, const auto& b) {
                      return a.second != b.second ? a.second > b.second
                                                  : a.first < b.first;
                    });
  all.resize(k);
  return all;
}

std::string_view to_string(TailMode mode) {
  return mode == TailMode::kUniformTail ? "uniform_tail" : "renormalize";
}

TailMode parse_tail_mode(std::string_view s) {
  if (s == "uniform_tail") return TailMode::kUniformTail;
  if (s == "renormalize") return TailMode::kRenormalize;
  throw InvalidArgument("unknown tail_mode '" + std::string(s) + "'");
}

PositionSummary summarize_topk(std::string token, double observed_logprob,
                               std::vector<TopKEntry> topk, TailMode mode,
                               std::size_t vocab_size) {
  if (topk.empty()) throw InvalidArgument("empty top-k list");
  std::stable_sort(topk.begin(), topk.end(),
                   [](const TopKEntry& a, const TopKEntry& b) {
                     return a.logprob > b.logprob;
                   });
  const std::size_t k = topk.size();
  bool observed_listed = false;
  std::int64_t greater = 0;
  double listed_mass = 0.0;
  for (const auto& e : topk) {
    if (e.token == token) observed_listed = true;
    if (e.logprob > observed_logprob) ++greater;
    listed_mass += std::exp(e.logprob);
  }

  PositionSummary s;
  s.token = std::move(token);
  s.observed_logprob = std::min(0.0, observed_logprob);
  s.rank = observed_listed ? greater + 1 : static_cast<std::int64_t>(k) + 1;
  s.exact = false;

  double mean = 0.0;
  double second = 0.0;
  if (mode == TailMode::kRenormalize) {
    const double log_mass = std::log(listed_mass);
    for (const auto& e : topk) {
      const double lp = e.logprob - log_mass;
      const double p = std::exp(lp);
      mean += p * lp;
      second += p * lp * lp;
    }
  } else {
    for (const auto& e : topk) {
      const double p = std::exp(e.logprob);
      mean += p * e.logprob;
      second += p * e.logprob * e.logprob;
    }
    const double tail_mass = std::max(0.0, 1.0 - listed_mass);
    if (tail_mass > 0.0 && vocab_size > k) {
      const double lq =
          std::log(tail_mass / static_cast<double>(vocab_size - k));
      mean += tail_mass * lq;
      second += tail_mass * lq * lq;
    }
  }
  s.dist_mean_logprob = mean;
  s.dist_entropy = -mean;
  s.dist_second_moment = std::max(second, mean * mean);
  s.topk = std::move(topk);
  return s;
}

// ---------------------------------------------------------------------------

void validate(const BackendConfig& c) {
  if (c.name.empty()) throw InvalidArgument("backend needs a name");
  if (c.max_parallel < 1) {
    throw InvalidArgument("backend '" + c.name + "': max_parallel must be >= 1");
  }
  if (c.kind == BackendKind::kRemote) {
    if (!c.endpoint_url || c.endpoint_url->empty()) {
      throw InvalidArgument("remote backend '" + c.name +
                            "' needs endpoint_url");
    }
    if (c.top_k < 2) {
      throw InvalidArgument("remote backend '" + c.name +
                            "': top_k must be >= 2");
    }
  } else if (c.toy.vocab_size < 2) {
    throw InvalidArgument("toy backend '" + c.name +
                          "': vocab_size must be >= 2");
  }
}

BackendConfig backend_config_from_json(const std::string& name,
                                       const json& j) {
  BackendConfig c;
  c.name = name;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "toy") {
      c.kind = BackendKind::kToy;
    } else if (kind == "remote") {
      c.kind = BackendKind::kRemote;
    } else {
      throw InvalidArgument("backend '" + name + "': unknown kind '" + kind +
                            "'");
    }
    if (j.contains("endpoint_url")) {
      c.endpoint_url = j["endpoint_url"].get<std::string>();
    }
    c.model = j.value("model", c.model);
    c.api_key_env = j.value("api_key_env", c.api_key_env);
    c.top_k = j.value("top_k", c.top_k);
    if (j.contains("tail_mode")) {
      c.tail_mode = parse_tail_mode(j["tail_mode"].get<std::string>());
    }
    c.vocab_size = j.value("vocab_size", c.vocab_size);
    c.tokenizer_id = j.value("tokenizer_id", c.tokenizer_id);
    c.max_parallel = j.value("max_parallel", c.max_parallel);
    if (j.contains("retry")) {
      c.retry.max_attempts =
          j["retry"].value("max_attempts", c.retry.max_attempts);
      c.retry.base_backoff_ms =
          j["retry"].value("base_backoff_ms", c.retry.base_backoff_ms);
    }
    if (c.kind == BackendKind::kToy) {
      c.toy.seed = j.value("seed", c.toy.seed);
      c.toy.vocab_size = j.value("vocab_size", c.toy.vocab_size);
      c.toy.context_window = j.value("context_window", c.toy.context_window);
      c.toy.deterministic = j.value("deterministic", c.toy.deterministic);
      c.toy.logit_scale = j.value("logit_scale", c.toy.logit_scale);
    }
  } catch (const json::exception& e) {
    throw ParseError("backend '" + name + "': " + e.what());
  }
  validate(c);
  return c;
}

json to_json(const BackendConfig& c) {
  json j;
  if (c.kind == BackendKind::kToy) {
    j["kind"] = "toy";
    j["seed"] = c.toy.seed;
    j["vocab_size"] = c.toy.vocab_size;
    j["context_window"] = c.toy.context_window;
    j["deterministic"] = c.toy.deterministic;
    j["logit_scale"] = c.toy.logit_scale;
  } else {
    j["kind"] = "remote";
    j["endpoint_url"] = c.endpoint_url.value_or("");
    j["model"] = c.model;
    j["api_key_env"] = c.api_key_env;
    j["top_k"] = c.top_k;
    j["tail_mode"] = to_string(c.tail_mode);
    j["vocab_size"] = c.vocab_size;
    j["tokenizer_id"] = c.tokenizer_id;
    j["retry"] = {{"max_attempts", c.retry.max_attempts},
                  {"base_backoff_ms", c.retry.base_backoff_ms}};
  }
  j["max_parallel"] = c.max_parallel;
  return j;
}

// ---------------------------------------------------------------------------

ScoreSequence ExactBackend::score(std::string_view record_id,
                                  std::string_view text) {
  if (trim(text).empty()) throw InvalidArgument("cannot score empty text");
  const std::vector<int> tokens = tokenize(text);
  if (tokens.empty()) throw InvalidArgument("text produced no tokens");
  ScoreSequence seq;
  seq.record_id = std::string(record_id);
  seq.backend_id = id();
  seq.tokenizer_id = tokenizer_id();
  seq.tokens.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto probs =
        next_distribution(std::span<const int>(tokens.data(), i));
    seq.tokens.push_back(summarize_distribution(
        probs, static_cast<std::size_t>(tokens[i]), piece(tokens[i])));
  }
  return seq;
}

ScoreSequence score_text(std::string_view text, MeasurementBackend& backend) {
  return backend.score("", text);
}

namespace {

double cross_entropy_exact(std::span<const double> observer,
                           std::span<const double> performer) {
  double x = 0.0;
  for (std::size_t t = 0; t < performer.size(); ++t) {
    if (performer[t] == 0.0) continue;
    if (observer[t] == 0.0) return std::numeric_limits<double>::infinity();
    x -= performer[t] * std::log(observer[t]);
  }
  return x;
}

// Token -> logprob view of one approximate position.
struct ApproxRow {
  std::map<std::string, double> listed;
  double tail_mass = 0.0;     // mass outside the list (uniform_tail only)
  double tail_logprob = 0.0;  // logprob of each unlisted token
};

ApproxRow approx_row(const PositionSummary& p, const TopKApproximation& a) {
  ApproxRow row;
  if (!p.topk || p.topk->empty()) {
    throw InvalidArgument("approximate cross-entropy needs top-k lists");
  }
  double mass = 0.0;
  double min_lp = 0.0;
  for (const auto& e : *p.topk) {
    mass += std::exp(e.logprob);
    min_lp = std::min(min_lp, e.logprob);
  }
  const std::size_t k = p.topk->size();
  if (a.tail_mode == TailMode::kRenormalize) {
    const double log_mass = std::log(mass);
    for (const auto& e : *p.topk) row.listed[e.token] = e.logprob - log_mass;
    // Unlisted tokens get the floor of the list; a zero would make the
    // cross-entropy infinite.
    row.tail_logprob = min_lp - log_mass;
  } else {
    for (const auto& e : *p.topk) row.listed[e.token] = e.logprob;
    row.tail_mass = std::max(0.0, 1.0 - mass);
    row.tail_logprob =
        row.tail_mass > 0.0 && a.vocab_size > k
            ? std::log(row.tail_mass / static_cast<double>(a.vocab_size - k))
            : min_lp;
  }
  return row;
}

double cross_entropy_approx(const ApproxRow& observer,
                            const ApproxRow& performer) {
  double x = 0.0;
  for (const auto& [tok, lp_b] : performer.listed) {
    auto it = observer.listed.find(tok);
    const double lp_a =
        it != observer.listed.end() ? it->second : observer.tail_logprob;
    x -= std::exp(lp_b) * lp_a;
  }
  x -= performer.tail_mass * observer.tail_logprob;
  return x;
}

}  // namespace

CrossScore cross_score(std::string_view text, MeasurementBackend& observer,
                       MeasurementBackend& performer) {
  if (observer.tokenizer_id() != performer.tokenizer_id()) {
    throw InvalidArgument("cross_score needs a shared tokenizer ('" +
                          observer.tokenizer_id() + "' vs '" +
                          performer.tokenizer_id() + "')");
  }
  CrossScore out;
  out.observer = observer.score("", text);
  out.performer = performer.score("", text);
  const auto& a = out.observer.tokens;
  const auto& b = out.performer.tokens;
  if (a.size() != b.size()) {
    throw InvalidArgument("observer and performer sequences differ in length");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].token != b[i].token) {
      throw InvalidArgument("observer and performer tokens differ at " +
                            std::to_string(i));
    }
  }

  const ExactBackend* exact_a = observer.as_exact();
  const ExactBackend* exact_b = performer.as_exact();
  if (exact_a != nullptr && exact_b != nullptr) {
    const auto tokens = exact_a->tokenize(text);
    out.cross_entropy.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      std::span<const int> ctx(tokens.data(), i);
      const auto pa = exact_a->next_distribution(ctx);
      const auto pb = exact_b->next_distribution(ctx);
      if (pa.size() != pb.size()) {
        throw InvalidArgument("observer and performer vocabularies differ");
      }
      out.cross_entropy.push_back(cross_entropy_exact(pa, pb));
    }
    out.exact = true;
    return out;
  }

  const auto approx_a =
      observer.approximation().value_or(TopKApproximation{TailMode::kRenormalize, 0});
  const auto approx_b =
      performer.approximation().value_or(TopKApproximation{TailMode::kRenormalize, 0});
  out.cross_entropy.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.cross_entropy.push_back(cross_entropy_approx(approx_row(a[i], approx_a),
                                                     approx_row(b[i], approx_b)));
  }
  out.exact = false;
  return out;
}

std::vector<ScoreSequence> score_records(MeasurementBackend& backend,
                                         const std::vector<TextRecord>& records,
                                         std::size_t max_parallel) {
  std::vector<ScoreSequence> out(records.size());
  parallel_for(records.size(), max_parallel, [&](std::size_t i) {
    out[i] = backend.score(records[i].id, records[i].text);
  });
  return out;
}

}  // namespace aigt

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

#include "aigt/detect.h"

#include <cmath>

#include "aigt/error.h"
#include "aigt/parallel.h"

namespace aigt {

using nlohmann::json;

namespace {

constexpr double kEps = 1e-9;

void require_nonempty(const ScoreSequence& seq) {
  if (seq.tokens.empty()) {
    throw InvalidArgument("cannot score an empty sequence (record '" +
                          seq.record_id + "')");
  }
}

DetectorScore make_score(DetectorKind kind, double value, bool exact) {
  DetectorScore s;
  s.detector = DetectorId{kind, {}}.name();
  s.value = value;
  s.orientation = orientation_of(kind);
  s.exact = exact;
  return s;
}

template <typename F>
double mean_of(const ScoreSequence& seq, F f) {
  double sum = 0.0;
  for (const auto& p : seq.tokens) sum += f(p);
  return sum / static_cast<double>(seq.tokens.size());
}

}  // namespace

std::string_view to_string(Orientation o) {
  return o == Orientation::kHigherIsAi ? "higher_is_ai" : "lower_is_ai";
}

Orientation parse_orientation(std::string_view s) {
  if (s == "higher_is_ai") return Orientation::kHigherIsAi;
  if (s == "lower_is_ai") return Orientation::kLowerIsAi;
  throw InvalidArgument("unknown orientation '" + std::string(s) + "'");
}

std::string DetectorId::name() const {
  switch (kind) {
    case DetectorKind::kLoglik: return "loglik";
    case DetectorKind::kEntropy: return "entropy";
    case DetectorKind::kRank: return "rank";
    case DetectorKind::kLogrank: return "logrank";
    case DetectorKind::kLrr: return "lrr";
    case DetectorKind::kFastDetectGpt: return "fastdetectgpt";
    case DetectorKind::kBinoculars: return "binoculars";
    case DetectorKind::kBlackbox: return "blackbox:" + blackbox_name;
  }
  return {};
}

DetectorId parse_detector(std::string_view name) {
  for (const auto& d : metric_detectors()) {
    if (d.name() == name) return d;
  }
  constexpr std::string_view kPrefix = "blackbox:";
  if (name.substr(0, kPrefix.size()) == kPrefix && name.size() > kPrefix.size()) {
    return DetectorId{DetectorKind::kBlackbox,
                      std::string(name.substr(kPrefix.size()))};
  }
  throw InvalidArgument("unknown detector '" + std::string(name) + "'");
}

Orientation orientation_of(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::kLoglik:
    case DetectorKind::kLrr:
    case DetectorKind::kFastDetectGpt:
    case DetectorKind::kBlackbox:
      return Orientation::kHigherIsAi;
    case DetectorKind::kEntropy:
    case DetectorKind::kRank:
    case DetectorKind::kLogrank:
    case DetectorKind::kBinoculars:
      return Orientation::kLowerIsAi;
  }
  throw InvalidArgument("unknown detector kind");
}

const std::vector<DetectorId>& metric_detectors() {
  static const std::vector<DetectorId> kAll = {
      {DetectorKind::kLoglik, {}},        {DetectorKind::kEntropy, {}},
      {DetectorKind::kRank, {}},          {DetectorKind::kLogrank, {}},
      {DetectorKind::kLrr, {}},           {DetectorKind::kFastDetectGpt, {}},
      {DetectorKind::kBinoculars, {}},
  };
  return kAll;
}

DetectorScore score_loglik(const ScoreSequence& seq) {
  require_nonempty(seq);
  return make_score(DetectorKind::kLoglik,
                    mean_of(seq, [](const auto& p) { return p.observed_logprob; }),
                    seq.exact());
}

DetectorScore score_entropy(const ScoreSequence& seq) {
  require_nonempty(seq);
  return make_score(DetectorKind::kEntropy,
                    mean_of(seq, [](const auto& p) { return p.dist_entropy; }),
                    seq.exact());
}

DetectorScore score_rank(const ScoreSequence& seq) {
  require_nonempty(seq);
  return make_score(
      DetectorKind::kRank,
      mean_of(seq, [](const auto& p) { return static_cast<double>(p.rank); }),
      seq.exact());
}

DetectorScore score_logrank(const ScoreSequence& seq) {
  require_nonempty(seq);
  return make_score(DetectorKind::kLogrank,
                    mean_of(seq,
                            [](const auto& p) {
                              return std::log(static_cast<double>(p.rank));
                            }),
                    seq.exact());
}

DetectorScore score_lrr(const ScoreSequence& seq) {
  require_nonempty(seq);
  double num = 0.0;
  double den = 0.0;
  for (const auto& p : seq.tokens) {
    num -= p.observed_logprob;
    den += std::log(static_cast<double>(p.rank));
  }
  if (den < kEps) {
    throw UnscorableError("lrr: every token has rank 1 (record '" +
                          seq.record_id + "')");
  }
  return make_score(DetectorKind::kLrr, num / den, seq.exact());
}

CurvatureSummary curvature_summary(const ScoreSequence& seq) {
  CurvatureSummary c;
  for (const auto& p : seq.tokens) {
    c.total_logprob += p.observed_logprob;
    c.mu_tilde += p.dist_mean_logprob;
    c.sigma_tilde_sq += std::max(0.0, p.dist_variance());
  }
  return c;
}

DetectorScore score_fastdetectgpt(const ScoreSequence& seq) {
  require_nonempty(seq);
  const CurvatureSummary c = curvature_summary(seq);
  if (c.sigma_tilde_sq < kEps) {
    throw UnscorableError("fastdetectgpt: zero variance (record '" +
                          seq.record_id + "')");
  }
  return make_score(DetectorKind::kFastDetectGpt,
                    (c.total_logprob - c.mu_tilde) / std::sqrt(c.sigma_tilde_sq),
                    seq.exact());
}

DetectorScore score_binoculars(const ScoreSequence& observer,
                               const ScoreSequence& performer,
                               const std::vector<double>& cross) {
  require_nonempty(observer);
  if (observer.tokenizer_id != performer.tokenizer_id) {
    throw InvalidArgument("binoculars: tokenizers differ ('" +
                          observer.tokenizer_id + "' vs '" +
                          performer.tokenizer_id + "')");
  }
  if (observer.tokens.size() != performer.tokens.size() ||
      cross.size() != observer.tokens.size()) {
    throw InvalidArgument("binoculars: sequences are not aligned");
  }
  double nll = 0.0;
  double x = 0.0;
  for (std::size_t i = 0; i < cross.size(); ++i) {
    nll -= observer.tokens[i].observed_logprob;
    x += cross[i];
  }
  const double n = static_cast<double>(cross.size());
  if (x / n < kEps) {
    throw UnscorableError("binoculars: zero cross-entropy (record '" +
                          observer.record_id + "')");
  }
  return make_score(DetectorKind::kBinoculars, (nll / n) / (x / n),
                    observer.exact() && performer.exact());
}

DetectorScore score_binoculars(const CrossScore& cross) {
  DetectorScore s =
      score_binoculars(cross.observer, cross.performer, cross.cross_entropy);
  s.exact = s.exact && cross.exact;
  return s;
}

DetectorScore score_metric(DetectorKind kind, const ScoreSequence& seq) {
  switch (kind) {
    case DetectorKind::kLoglik: return score_loglik(seq);
    case DetectorKind::kEntropy: return score_entropy(seq);
    case DetectorKind::kRank: return score_rank(seq);
    case DetectorKind::kLogrank: return score_logrank(seq);
    case DetectorKind::kLrr: return score_lrr(seq);
    case DetectorKind::kFastDetectGpt: return score_fastdetectgpt(seq);
    default:
      throw InvalidArgument("not a single-sequence detector: " +
                            DetectorId{kind, {}}.name());
  }
}

BlackboxConfig blackbox_config_from_json(const std::string& name,
                                         const json& j) {
  BlackboxConfig c;
  c.name = name;
  try {
    c.endpoint_url = j.at("endpoint_url").get<std::string>();
    c.api_key_env = j.value("api_key_env", std::string());
    c.timeout_seconds = j.value("timeout_seconds", 60);
    if (j.contains("retry")) {
      c.retry.max_attempts = j["retry"].value("max_attempts", 3);
      c.retry.base_backoff_ms = j["retry"].value("base_backoff_ms", 250);
    }
  } catch (const json::exception& e) {
    throw InvalidArgument("classifier '" + name + "': " + e.what());
  }
  if (c.endpoint_url.empty()) {
    throw InvalidArgument("classifier '" + name + "' needs endpoint_url");
  }
  return c;
}

json to_json(const BlackboxConfig& c) {
  return json{{"endpoint_url", c.endpoint_url},
              {"api_key_env", c.api_key_env},
              {"timeout_seconds", c.timeout_seconds},
              {"retry",
               {{"max_attempts", c.retry.max_attempts},
                {"base_backoff_ms", c.retry.base_backoff_ms}}}};
}

HttpBlackboxClassifier::HttpBlackboxClassifier(BlackboxConfig config)
    : config_(std::move(config)) {}

double HttpBlackboxClassifier::p_ai(std::string_view text) {
  HeaderList headers;
  add_bearer_from_env(headers, config_.api_key_env);
  const json response =
      post_json(config_.endpoint_url, json{{"text", std::string(text)}},
                headers, config_.retry, config_.timeout_seconds);
  if (!response.contains("p_ai") || !response["p_ai"].is_number()) {
    throw RemoteError("classifier '" + config_.name +
                      "' response lacks numeric p_ai");
  }
  return response["p_ai"].get<double>();
}

DetectorScore score_blackbox(std::string_view text,
                             BlackboxClassifier& classifier) {
  const double p = classifier.p_ai(text);
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("classifier '" + classifier.name() +
                          "' returned probability outside [0,1]: " +
                          std::to_string(p));
  }
  DetectorScore s;
  s.detector = DetectorId{DetectorKind::kBlackbox, classifier.name()}.name();
  s.value = p;
  s.orientation = Orientation::kHigherIsAi;
  s.exact = true;
  return s;
}

json to_json(const RecordScore& s) {
  json j{{"record_id", s.record_id},
         {"label", to_string(s.label)},
         {"value", nullptr},
         {"exact", s.exact},
         {"degenerate", s.degenerate}};
  if (s.value) j["value"] = *s.value;
  if (!s.error.empty()) j["error"] = s.error;
  return j;
}

RecordScore record_score_from_json(const json& j) {
  RecordScore s;
  try {
    s.record_id = j.at("record_id").get<std::string>();
    s.label = parse_label(j.at("label").get<std::string>());
    if (j.contains("value") && !j["value"].is_null()) {
      s.value = j["value"].get<double>();
    }
    s.exact = j.value("exact", true);
    s.degenerate = j.value("degenerate", false);
    s.error = j.value("error", std::string());
  } catch (const json::exception& e) {
    throw ParseError(std::string("record score: ") + e.what());
  }
  return s;
}

std::vector<RecordScore> detect_records(const DetectorId& detector,
                                       const std::vector<TextRecord>& records,
                                       const DetectorContext& ctx) {
  switch (detector.kind) {
    case DetectorKind::kBlackbox:
      if (ctx.classifier == nullptr) {
        throw InvalidArgument(detector.name() + " needs a classifier");
      }
      break;
    case DetectorKind::kBinoculars:
      if (ctx.backend == nullptr || ctx.performer == nullptr) {
        throw InvalidArgument("binoculars needs observer and performer backends");
      }
      if (ctx.backend->tokenizer_id() != ctx.performer->tokenizer_id()) {
        throw InvalidArgument("binoculars needs backends sharing a tokenizer");
      }
      break;
    default:
      if (ctx.backend == nullptr) {
        throw InvalidArgument(detector.name() + " needs a measurement backend");
      }
  }

  std::vector<RecordScore> out(records.size());
  parallel_for(records.size(), ctx.max_parallel, [&](std::size_t i) {
    const TextRecord& r = records[i];
    RecordScore& rs = out[i];
    rs.record_id = r.id;
    rs.label = r.label;
    try {
      DetectorScore s;
      if (detector.kind == DetectorKind::kBlackbox) {
        s = score_blackbox(r.text, *ctx.classifier);
      } else if (detector.kind == DetectorKind::kBinoculars) {
        s = score_binoculars(cross_score(r.text, *ctx.backend, *ctx.performer));
      } else {
        s = score_metric(detector.kind, ctx.backend->score(r.id, r.text));
      }
      rs.value = s.value;
      rs.exact = s.exact;
    } catch (const UnscorableError& e) {
      rs.degenerate = true;
      rs.error = e.what();
    }
  });
  return out;
}

}  // namespace aigt

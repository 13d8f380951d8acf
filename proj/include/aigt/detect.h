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

#ifndef AIGT_DETECT_H_
#define AIGT_DETECT_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aigt/corpus.h"
#include "aigt/http.h"
#include "aigt/measure.h"

namespace aigt {

enum class Orientation { kHigherIsAi, kLowerIsAi };
std::string_view to_string(Orientation o);
Orientation parse_orientation(std::string_view s);

enum class DetectorKind {
  kLoglik,
  kEntropy,
  kRank,
  kLogrank,
  kLrr,
  kFastDetectGpt,
  kBinoculars,
  kBlackbox,
};

// A detector name: one of the seven metric names, or "blackbox:<name>".
struct DetectorId {
  DetectorKind kind = DetectorKind::kLoglik;
  std::string blackbox_name;  // only for kBlackbox

  std::string name() const;
  bool operator==(const DetectorId&) const = default;
};

DetectorId parse_detector(std::string_view name);
Orientation orientation_of(DetectorKind kind);
inline Orientation orientation_of(const DetectorId& id) {
  return orientation_of(id.kind);
}
// loglik, entropy, rank, logrank, lrr, fastdetectgpt, binoculars.
const std::vector<DetectorId>& metric_detectors();

struct DetectorScore {
  std::string detector;
  double value = 0.0;
  Orientation orientation = Orientation::kHigherIsAi;
  bool exact = true;
};

struct CurvatureSummary {
  double total_logprob = 0.0;
  double mu_tilde = 0.0;
  double sigma_tilde_sq = 0.0;
};

// Degenerate inputs (all ranks 1, zero variance, zero cross-entropy) throw
// UnscorableError; empty sequences throw InvalidArgument.
DetectorScore score_loglik(const ScoreSequence& seq);
DetectorScore score_entropy(const ScoreSequence& seq);
DetectorScore score_rank(const ScoreSequence& seq);
DetectorScore score_logrank(const ScoreSequence& seq);
DetectorScore score_lrr(const ScoreSequence& seq);
CurvatureSummary curvature_summary(const ScoreSequence& seq);
DetectorScore score_fastdetectgpt(const ScoreSequence& seq);
DetectorScore score_binoculars(const ScoreSequence& observer,
                               const ScoreSequence& performer,
                               const std::vector<double>& cross);
DetectorScore score_binoculars(const CrossScore& cross);

// Any of the six single-sequence metrics.
DetectorScore score_metric(DetectorKind kind, const ScoreSequence& seq);

// External classifier returning the probability that a text is AI-written.
class BlackboxClassifier {
 public:
  virtual ~BlackboxClassifier() = default;
  virtual const std::string& name() const = 0;
  virtual double p_ai(std::string_view text) = 0;
};

struct BlackboxConfig {
  std::string name;
  std::string endpoint_url;
  std::string api_key_env;
  RetryPolicy retry;
  int timeout_seconds = 60;
};

BlackboxConfig blackbox_config_from_json(const std::string& name,
                                         const nlohmann::json& j);
nlohmann::json to_json(const BlackboxConfig& config);

// POST {"text": ...} -> {"p_ai": x}.
class HttpBlackboxClassifier : public BlackboxClassifier {
 public:
  explicit HttpBlackboxClassifier(BlackboxConfig config);
  const std::string& name() const override { return config_.name; }
  double p_ai(std::string_view text) override;

 private:
  BlackboxConfig config_;
};

class FunctionBlackboxClassifier : public BlackboxClassifier {
 public:
  FunctionBlackboxClassifier(std::string name,
                             std::function<double(std::string_view)> fn)
      : name_(std::move(name)), fn_(std::move(fn)) {}
  const std::string& name() const override { return name_; }
  double p_ai(std::string_view text) override { return fn_(text); }

 private:
  std::string name_;
  std::function<double(std::string_view)> fn_;
};

// Throws RemoteError on transport failure and InvalidArgument when the
// returned probability lies outside [0, 1].
DetectorScore score_blackbox(std::string_view text,
                             BlackboxClassifier& classifier);

// What a detector needs to score a record. `backend` serves the six
// single-sequence metrics and is Binoculars' observer; `performer` is the
// second Binoculars model.
struct DetectorContext {
  MeasurementBackend* backend = nullptr;
  MeasurementBackend* performer = nullptr;
  BlackboxClassifier* classifier = nullptr;
  std::size_t max_parallel = 1;
};

// Outcome for one record: a value, or the reason it could not be scored.
struct RecordScore {
  std::string record_id;
  Label label = Label::kHuman;
  std::optional<double> value;
  bool exact = true;
  bool degenerate = false;  // UnscorableError
  std::string error;
};

nlohmann::json to_json(const RecordScore& score);
RecordScore record_score_from_json(const nlohmann::json& j);

// Throws InvalidArgument when the context lacks what the detector needs.
// Degenerate records come back with degenerate=true; other failures
// propagate.
std::vector<RecordScore> detect_records(const DetectorId& detector,
                                       const std::vector<TextRecord>& records,
                                       const DetectorContext& ctx);

}  // namespace aigt

#endif  // AIGT_DETECT_H_

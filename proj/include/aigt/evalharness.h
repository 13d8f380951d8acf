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

#ifndef AIGT_EVALHARNESS_H_
#define AIGT_EVALHARNESS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aigt/detect.h"
#include "json.hpp"

namespace aigt {

enum class ThresholdSource { kCalibrated, kFixedDefault };
std::string_view to_string(ThresholdSource s);

// A record is AI iff its score lies strictly on the AI side of `threshold`;
// equality classifies as human.
struct ThresholdModel {
  std::string detector;
  double threshold = 0.0;
  Orientation orientation = Orientation::kHigherIsAi;
  ThresholdSource source = ThresholdSource::kCalibrated;
  std::optional<double> calibration_accuracy;

  bool is_ai(double score) const {
    return orientation == Orientation::kHigherIsAi ? score > threshold
                                                   : score < threshold;
  }
};

nlohmann::json to_json(const ThresholdModel& m);
ThresholdModel threshold_model_from_json(const nlohmann::json& j);

double balanced_accuracy(const std::vector<double>& human,
                         const std::vector<double>& ai, double threshold,
                         Orientation orientation);

// Sweeps -inf, the midpoints between adjacent distinct pooled scores, and
// +inf; keeps the threshold with the highest balanced accuracy, the smallest
// one on ties.
ThresholdModel calibrate_threshold(const std::vector<double>& human,
                                   const std::vector<double>& ai,
                                   Orientation orientation,
                                   std::string detector = {});

// P(AI score is more AI-like than human score) + 0.5 P(tie), by ranks.
double auroc(const std::vector<double>& ai, const std::vector<double>& human,
             Orientation orientation);

struct TprAtFpr {
  double target_fpr = 0.01;
  double threshold = 0.0;
  double realized_fpr = 0.0;
  double tpr = 0.0;
};

// Most permissive empirical threshold with FPR <= target; no interpolation.
TprAtFpr tpr_at_fpr(const std::vector<double>& ai,
                    const std::vector<double>& human, Orientation orientation,
                    double target_fpr);

// Shipped thresholds for the off-the-shelf scenario: 0.5 for black-box
// classifiers and the published Binoculars low-FPR threshold. Other
// detectors have none.
std::optional<ThresholdModel> default_threshold(const DetectorId& detector);
inline constexpr double kBinocularsDefaultThreshold = 0.9015310749276843;

struct Confusion {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const Confusion&) const = default;
};

struct EvalReport {
  std::string dataset_id;
  std::string detector;
  std::string measurement_backend;
  std::optional<ThresholdModel> threshold;  // absent in AUROC-only runs
  std::optional<double> accuracy;           // present iff threshold is
  std::optional<Confusion> confusion;
  double auroc = 0.5;
  TprAtFpr tpr_at_fpr;
  std::size_t n_evaluated = 0;  // includes excluded records
  std::size_t n_excluded_degenerate = 0;
  bool exact = true;
};

nlohmann::json to_json(const EvalReport& r);

// Splits scores by label, skipping degenerate records. Throws
// InvalidArgument naming records that carry neither a value nor a
// degenerate flag.
void partition_scores(const std::vector<RecordScore>& scores,
                      std::vector<double>& human, std::vector<double>& ai,
                      std::size_t* n_degenerate = nullptr);

ThresholdModel calibrate_on(const std::vector<RecordScore>& scores,
                            const DetectorId& detector);

EvalReport evaluate(std::string dataset_id, const DetectorId& detector,
                    std::string backend_id,
                    const std::vector<RecordScore>& scores,
                    const std::optional<ThresholdModel>& threshold,
                    double target_fpr = 0.01);

struct PermutationBaseline {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t permutations = 0;
};

// AUROC under random relabelings of the pooled scores (class sizes kept).
PermutationBaseline permutation_auroc_baseline(const std::vector<double>& ai,
                                               const std::vector<double>& human,
                                               Orientation orientation,
                                               std::size_t permutations,
                                               std::uint64_t seed);

// ---------------------------------------------------------------------------
// Matrices

enum class Scenario { kIdealized, kOffTheShelf };
std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view s);

struct MatrixDataset {
  std::string id;
  std::vector<TextRecord> train;  // calibration split (idealized only)
  std::vector<TextRecord> test;
};

struct MatrixSpec {
  Scenario scenario = Scenario::kIdealized;
  bool auroc_only = false;
  double target_fpr = 0.01;
  std::uint64_t seed = 0;
  std::vector<DetectorId> detectors;
  // Cross layout: every dataset against every backend in `backends`.
  std::vector<std::string> backends;
  // Own-model layout (set own_model): each dataset is measured only by the
  // backend mapped to it; datasets without one get unavailable cells.
  bool own_model = false;
  std::map<std::string, std::string> own_backend;
  // Binoculars observer backend -> performer backend.
  std::map<std::string, std::string> binoculars_performer;
  std::size_t max_parallel = 1;
};

struct MatrixResources {
  std::map<std::string, MeasurementBackend*> backends;
  std::map<std::string, BlackboxClassifier*> classifiers;
  // Recorded verbatim in the manifest.
  std::map<std::string, nlohmann::json> backend_configs;
  nlohmann::json extra_manifest = nlohmann::json::object();
};

inline constexpr std::string_view kUnavailable = "—";

struct MatrixCell {
  std::string dataset;
  std::string detector;
  std::string backend;  // "n/a" for black-box detectors
  std::optional<EvalReport> report;
  std::string unavailable_reason;
  bool failed = false;  // an error, as opposed to a structural gap
};

struct MatrixReport {
  Scenario scenario = Scenario::kIdealized;
  bool auroc_only = false;
  double target_fpr = 0.01;
  std::vector<std::string> rows;  // dataset ids
  std::vector<std::string> cols;  // column labels
  std::vector<MatrixCell> cells;  // row-major, rows.size() * cols.size()
  nlohmann::json manifest;

  const MatrixCell& at(std::size_t row, std::size_t col) const {
    return cells[row * cols.size() + col];
  }
};

MatrixReport run_matrix(const std::vector<MatrixDataset>& datasets,
                        const MatrixSpec& spec,
                        const MatrixResources& resources);

// Fixed-precision renderings, stable byte for byte across runs.
std::string format_metric(double v);
std::string to_csv(const MatrixReport& report);
std::string to_markdown(const MatrixReport& report);
std::string manifest_json(const MatrixReport& report);

}  // namespace aigt

#endif  // AIGT_EVALHARNESS_H_

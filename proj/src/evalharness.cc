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

#include "aigt/evalharness.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "aigt/error.h"
#include "aigt/text_util.h"

namespace aigt {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_classes(const std::vector<double>& a, const std::vector<double>& b,
                     std::string_view what) {
  if (a.empty() || b.empty()) {
    throw InvalidArgument(std::string(what) +
                          ": both classes need at least one score");
  }
  for (const auto* v : {&a, &b}) {
    for (double x : *v) {
      if (std::isnan(x)) throw InvalidArgument(std::string(what) + ": NaN score");
    }
  }
}

json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw InvalidArgument("bad threshold value '" + s + "'");
  }
  return j.get<double>();
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string md_cell(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string_view to_string(ThresholdSource s) {
  return s == ThresholdSource::kCalibrated ? "calibrated" : "fixed_default";
}

json to_json(const ThresholdModel& m) {
  json j{{"detector", m.detector},
         {"threshold", number_json(m.threshold)},
         {"orientation", to_string(m.orientation)},
         {"source", to_string(m.source)}};
  if (m.calibration_accuracy) j["calibration_accuracy"] = *m.calibration_accuracy;
  return j;
}

ThresholdModel threshold_model_from_json(const json& j) {
  ThresholdModel m;
  try {
    m.detector = j.at("detector").get<std::string>();
    m.threshold = number_from_json(j.at("threshold"));
    m.orientation = j.contains("orientation")
                        ? parse_orientation(j["orientation"].get<std::string>())
                        : orientation_of(parse_detector(m.detector));
    const std::string source = j.value("source", std::string("calibrated"));
    if (source == "calibrated") {
      m.source = ThresholdSource::kCalibrated;
    } else if (source == "fixed_default") {
      m.source = ThresholdSource::kFixedDefault;
    } else {
      throw InvalidArgument("unknown threshold source '" + source + "'");
    }
    if (j.contains("calibration_accuracy")) {
      m.calibration_accuracy = j["calibration_accuracy"].get<double>();
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad threshold model: ") + e.what());
  }
  return m;
}

double balanced_accuracy(const std::vector<double>& human,
                         const std::vector<double>& ai, double threshold,
                         Orientation orientation) {
  require_classes(human, ai, "balanced_accuracy");
  ThresholdModel m;
  m.threshold = threshold;
  m.orientation = orientation;
  std::size_t tp = 0;
  std::size_t tn = 0;
  for (double s : ai) tp += m.is_ai(s) ? 1 : 0;
  for (double s : human) tn += m.is_ai(s) ? 0 : 1;
  return 0.5 * (static_cast<double>(tp) / static_cast<double>(ai.size()) +
                static_cast<double>(tn) / static_cast<double>(human.size()));
}

ThresholdModel calibrate_threshold(const std::vector<double>& human,
                                   const std::vector<double>& ai,
                                   Orientation orientation,
                                   std::string detector) {
  require_classes(human, ai, "calibrate_threshold");
  std::vector<std::pair<double, bool>> pooled;  // (score, is_ai)
  pooled.reserve(human.size() + ai.size());
  for (double s : human) pooled.emplace_back(s, false);
  for (double s : ai) pooled.emplace_back(s, true);
  std::sort(pooled.begin(), pooled.end());

  const std::uint64_t nh = human.size();
  const std::uint64_t na = ai.size();
  const bool higher = orientation == Orientation::kHigherIsAi;
  // Counts of each class at or below the current threshold.
  std::uint64_t h_below = 0;
  std::uint64_t a_below = 0;
  auto objective = [&] {
    // 2 * nh * na * balanced accuracy, kept integral for exact tie handling.
    const std::uint64_t tp = higher ? na - a_below : a_below;
    const std::uint64_t tn = higher ? h_below : nh - h_below;
    return tp * nh + tn * na;
  };

  double best_threshold = -kInf;
  std::uint64_t best = objective();
  std::size_t i = 0;
  while (i < pooled.size()) {
    const double v = pooled[i].first;
    while (i < pooled.size() && pooled[i].first == v) {
      (pooled[i].second ? a_below : h_below) += 1;
      ++i;
    }
    const double candidate =
        i < pooled.size() ? v + (pooled[i].first - v) / 2.0 : kInf;
    const std::uint64_t value = objective();
    if (value > best) {
      best = value;
      best_threshold = candidate;
    }
  }

  ThresholdModel m;
  m.detector = std::move(detector);
  m.threshold = best_threshold;
  m.orientation = orientation;
  m.source = ThresholdSource::kCalibrated;
  m.calibration_accuracy =
      static_cast<double>(best) / (2.0 * static_cast<double>(nh * na));
  return m;
}

double auroc(const std::vector<double>& ai, const std::vector<double>& human,
             Orientation orientation) {
  require_classes(ai, human, "auroc");
  const double sign = orientation == Orientation::kHigherIsAi ? 1.0 : -1.0;
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(ai.size() + human.size());
  for (double s : ai) pooled.emplace_back(sign * s, true);
  for (double s : human) pooled.emplace_back(sign * s, false);
  std::sort(pooled.begin(), pooled.end());
  // Ranks are 1-based; a tie group spanning ranks [lo, hi] gets (lo+hi)/2.
  // Doubling keeps every quantity an exact integer.
  std::uint64_t twice_rank_sum = 0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    std::uint64_t ai_in_group = 0;
    while (j < pooled.size() && pooled[j].first == pooled[i].first) {
      ai_in_group += pooled[j].second ? 1 : 0;
      ++j;
    }
    twice_rank_sum += ai_in_group * (static_cast<std::uint64_t>(i + 1) + j);
    i = j;
  }
  const std::uint64_t na = ai.size();
  const std::uint64_t nh = human.size();
  const std::uint64_t twice_u = twice_rank_sum - na * (na + 1);
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(na * nh));
}

TprAtFpr tpr_at_fpr(const std::vector<double>& ai,
                    const std::vector<double>& human, Orientation orientation,
                    double target_fpr) {
  require_classes(ai, human, "tpr_at_fpr");
  if (!(target_fpr > 0.0 && target_fpr < 1.0)) {
    throw InvalidArgument("target_fpr must lie in (0, 1)");
  }
  const bool higher = orientation == Orientation::kHigherIsAi;
  std::vector<double> h = human;
  // Most AI-like human scores first.
  if (higher) {
    std::sort(h.begin(), h.end(), std::greater<>());
  } else {
    std::sort(h.begin(), h.end());
  }
  const auto allowed = static_cast<std::size_t>(
      std::floor(target_fpr * static_cast<double>(h.size()) + 1e-9));
  ThresholdModel m;
  m.orientation = orientation;
  m.threshold = allowed >= h.size() ? (higher ? -kInf : kInf) : h[allowed];

  std::size_t fp = 0;
  std::size_t tp = 0;
  for (double s : human) fp += m.is_ai(s) ? 1 : 0;
  for (double s : ai) tp += m.is_ai(s) ? 1 : 0;
  TprAtFpr r;
  r.target_fpr = target_fpr;
  r.threshold = m.threshold;
  r.realized_fpr = static_cast<double>(fp) / static_cast<double>(human.size());
  r.tpr = static_cast<double>(tp) / static_cast<double>(ai.size());
  return r;
}

std::optional<ThresholdModel> default_threshold(const DetectorId& detector) {
  ThresholdModel m;
  m.detector = detector.name();
  m.orientation = orientation_of(detector);
  m.source = ThresholdSource::kFixedDefault;
  if (detector.kind == DetectorKind::kBlackbox) {
    m.threshold = 0.5;
    return m;
  }
  if (detector.kind == DetectorKind::kBinoculars) {
    m.threshold = kBinocularsDefaultThreshold;
    return m;
  }
  return std::nullopt;
}

json to_json(const EvalReport& r) {
  json j{{"dataset", r.dataset_id},
         {"detector", r.detector},
         {"backend", r.measurement_backend},
         {"auroc", r.auroc},
         {"tpr_at_fpr",
          {{"target_fpr", r.tpr_at_fpr.target_fpr},
           {"threshold", number_json(r.tpr_at_fpr.threshold)},
           {"realized_fpr", r.tpr_at_fpr.realized_fpr},
           {"tpr", r.tpr_at_fpr.tpr}}},
         {"n", r.n_evaluated},
         {"n_excluded_degenerate", r.n_excluded_degenerate},
         {"exact", r.exact}};
  if (r.threshold) j["threshold"] = to_json(*r.threshold);
  if (r.accuracy) j["accuracy"] = *r.accuracy;
  if (r.confusion) {
    j["confusion"] = {{"tp", r.confusion->tp},
                      {"fp", r.confusion->fp},
                      {"tn", r.confusion->tn},
                      {"fn", r.confusion->fn}};
  }
  return j;
}

void partition_scores(const std::vector<RecordScore>& scores,
                      std::vector<double>& human, std::vector<double>& ai,
                      std::size_t* n_degenerate) {
  std::vector<std::string> unscored;
  std::size_t degenerate = 0;
  for (const auto& s : scores) {
    if (s.degenerate) {
      ++degenerate;
    } else if (!s.value) {
      unscored.push_back(s.record_id);
    } else {
      (s.label == Label::kAi ? ai : human).push_back(*s.value);
    }
  }
  if (!unscored.empty()) {
    std::string msg = "unscored records:";
    for (std::size_t i = 0; i < unscored.size() && i < 20; ++i) {
      msg += " " + unscored[i];
    }
    if (unscored.size() > 20) {
      msg += " (+" + std::to_string(unscored.size() - 20) + " more)";
    }
    throw InvalidArgument(msg);
  }
  if (n_degenerate != nullptr) *n_degenerate = degenerate;
}

ThresholdModel calibrate_on(const std::vector<RecordScore>& scores,
                            const DetectorId& detector) {
  std::vector<double> human;
  std::vector<double> ai;
  partition_scores(scores, human, ai);
  return calibrate_threshold(human, ai, orientation_of(detector),
                             detector.name());
}

EvalReport evaluate(std::string dataset_id, const DetectorId& detector,
                    std::string backend_id,
                    const std::vector<RecordScore>& scores,
                    const std::optional<ThresholdModel>& threshold,
                    double target_fpr) {
  const Orientation orientation = orientation_of(detector);
  if (threshold && threshold->orientation != orientation) {
    throw InvalidArgument("threshold orientation does not match detector " +
                          detector.name());
  }
  EvalReport r;
  r.dataset_id = std::move(dataset_id);
  r.detector = detector.name();
  r.measurement_backend = std::move(backend_id);
  r.n_evaluated = scores.size();

  std::vector<double> human;
  std::vector<double> ai;
  partition_scores(scores, human, ai, &r.n_excluded_degenerate);
  for (const auto& s : scores) r.exact = r.exact && s.exact;

  r.auroc = auroc(ai, human, orientation);
  r.tpr_at_fpr = tpr_at_fpr(ai, human, orientation, target_fpr);
  if (threshold) {
    r.threshold = threshold;
    Confusion c;
    for (double s : ai) (threshold->is_ai(s) ? c.tp : c.fn) += 1;
    for (double s : human) (threshold->is_ai(s) ? c.fp : c.tn) += 1;
    r.confusion = c;
    r.accuracy = static_cast<double>(c.tp + c.tn) /
                 static_cast<double>(c.total());
  }
  return r;
}

PermutationBaseline permutation_auroc_baseline(const std::vector<double>& ai,
                                               const std::vector<double>& human,
                                               Orientation orientation,
                                               std::size_t permutations,
                                               std::uint64_t seed) {
  require_classes(ai, human, "permutation_auroc_baseline");
  if (permutations < 2) throw InvalidArgument("need at least 2 permutations");
  std::vector<double> pooled = ai;
  pooled.insert(pooled.end(), human.begin(), human.end());
  std::mt19937_64 rng(seed);
  std::vector<double> values;
  values.reserve(permutations);
  std::vector<double> a(ai.size());
  std::vector<double> h(human.size());
  for (std::size_t p = 0; p < permutations; ++p) {
    for (std::size_t i = pooled.size() - 1; i > 0; --i) {
      std::swap(pooled[i], pooled[uniform_below(rng, i + 1)]);
    }
    std::copy(pooled.begin(), pooled.begin() + a.size(), a.begin());
    std::copy(pooled.begin() + a.size(), pooled.end(), h.begin());
    values.push_back(auroc(a, h, orientation));
  }
  PermutationBaseline b;
  b.permutations = permutations;
  b.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(permutations);
  double ss = 0.0;
  for (double v : values) ss += (v - b.mean) * (v - b.mean);
  b.sd = std::sqrt(ss / static_cast<double>(permutations - 1));
  return b;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Scenario s) {
  return s == Scenario::kIdealized ? "idealized" : "off_the_shelf";
}

Scenario parse_scenario(std::string_view s) {
  if (s == "idealized") return Scenario::kIdealized;
  if (s == "off_the_shelf" || s == "off-the-shelf") return Scenario::kOffTheShelf;
  throw InvalidArgument("unknown scenario '" + std::string(s) + "'");
}

namespace {

struct Column {
  std::string label;
  DetectorId detector;
  std::string backend;  // empty in own-model layout; "n/a" for black boxes
};

std::vector<Column> layout_columns(const MatrixSpec& spec) {
  std::vector<Column> cols;
  std::size_t metric_count = 0;
  for (const auto& d : spec.detectors) {
    metric_count += d.kind == DetectorKind::kBlackbox ? 0 : 1;
  }
  for (const auto& d : spec.detectors) {
    if (d.kind == DetectorKind::kBlackbox) {
      cols.push_back({d.name(), d, "n/a"});
    } else if (spec.own_model) {
      cols.push_back({d.name(), d, ""});
    } else {
      for (const auto& b : spec.backends) {
        cols.push_back({metric_count == 1 ? b : d.name() + "@" + b, d, b});
      }
    }
  }
  return cols;
}

void run_cell(const MatrixDataset& ds, const Column& col, const MatrixSpec& spec,
              const MatrixResources& res, MatrixCell& cell) {
  cell.dataset = ds.id;
  cell.detector = col.detector.name();
  cell.backend = col.backend;
  if (spec.own_model && col.detector.kind != DetectorKind::kBlackbox) {
    auto it = spec.own_backend.find(ds.id);
    if (it == spec.own_backend.end()) {
      cell.backend = std::string(kUnavailable);
      cell.unavailable_reason = "no white-box measurement model for dataset";
      return;
    }
    cell.backend = it->second;
  }

  DetectorContext ctx;
  ctx.max_parallel = spec.max_parallel;
  if (col.detector.kind == DetectorKind::kBlackbox) {
    auto it = res.classifiers.find(col.detector.blackbox_name);
    if (it == res.classifiers.end() || it->second == nullptr) {
      cell.unavailable_reason =
          "classifier '" + col.detector.blackbox_name + "' not configured";
      return;
    }
    ctx.classifier = it->second;
  } else {
    auto it = res.backends.find(cell.backend);
    if (it == res.backends.end() || it->second == nullptr) {
      cell.unavailable_reason = "backend '" + cell.backend + "' not configured";
      return;
    }
    ctx.backend = it->second;
    if (col.detector.kind == DetectorKind::kBinoculars) {
      auto p = spec.binoculars_performer.find(cell.backend);
      if (p == spec.binoculars_performer.end()) {
        cell.unavailable_reason = "no binoculars performer for '" +
                                  cell.backend + "'";
        return;
      }
      auto pb = res.backends.find(p->second);
      if (pb == res.backends.end() || pb->second == nullptr) {
        cell.unavailable_reason = "backend '" + p->second + "' not configured";
        return;
      }
      ctx.performer = pb->second;
    }
  }

  try {
    std::optional<ThresholdModel> threshold;
    if (!spec.auroc_only) {
      if (spec.scenario == Scenario::kIdealized) {
        if (ds.train.empty()) {
          throw InvalidArgument("dataset '" + ds.id +
                                "' has no calibration split");
        }
        threshold = calibrate_on(detect_records(col.detector, ds.train, ctx),
                                 col.detector);
      } else {
        threshold = default_threshold(col.detector);
        if (!threshold) {
          cell.unavailable_reason = "no off-the-shelf threshold";
          return;
        }
      }
    }
    cell.report = evaluate(ds.id, col.detector, cell.backend,
                           detect_records(col.detector, ds.test, ctx),
                           threshold, spec.target_fpr);
  } catch (const Error& e) {
    cell.report.reset();
    cell.unavailable_reason = e.what();
    cell.failed = true;
  }
}

}  // namespace

MatrixReport run_matrix(const std::vector<MatrixDataset>& datasets,
                        const MatrixSpec& spec,
                        const MatrixResources& resources) {
  if (spec.detectors.empty()) throw InvalidArgument("matrix needs detectors");
  if (!spec.own_model && spec.backends.empty()) {
    for (const auto& d : spec.detectors) {
      if (d.kind != DetectorKind::kBlackbox) {
        throw InvalidArgument("matrix needs at least one backend");
      }
    }
  }
  const std::vector<Column> cols = layout_columns(spec);

  MatrixReport report;
  report.scenario = spec.scenario;
  report.auroc_only = spec.auroc_only;
  report.target_fpr = spec.target_fpr;
  for (const auto& ds : datasets) report.rows.push_back(ds.id);
  for (const auto& c : cols) report.cols.push_back(c.label);
  report.cells.resize(datasets.size() * cols.size());
  for (std::size_t r = 0; r < datasets.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      run_cell(datasets[r], cols[c], spec, resources,
               report.cells[r * cols.size() + c]);
    }
  }

  json config;
  config["scenario"] = to_string(spec.scenario);
  config["auroc_only"] = spec.auroc_only;
  config["target_fpr"] = spec.target_fpr;
  config["seed"] = spec.seed;
  config["detectors"] = json::array();
  for (const auto& d : spec.detectors) config["detectors"].push_back(d.name());
  config["backends"] = json::object();
  for (const auto& [name, cfg] : resources.backend_configs) {
    config["backends"][name] = cfg;
  }
  config["layout"] = spec.own_model ? "own_model" : "cross";
  config["column_backends"] = spec.backends;
  config["own_backend"] = spec.own_backend;
  config["binoculars_performer"] = spec.binoculars_performer;
  config["datasets"] = json::array();
  for (const auto& ds : datasets) {
    config["datasets"].push_back(
        {{"id", ds.id}, {"n_train", ds.train.size()}, {"n_test", ds.test.size()}});
  }
  config["extra"] = resources.extra_manifest;

  json manifest;
  manifest["config"] = config;
  manifest["config_sha256"] = sha256_hex(config.dump());
  manifest["thresholds"] = json::array();
  manifest["unavailable"] = json::array();
  for (const auto& cell : report.cells) {
    if (cell.report && cell.report->threshold) {
      json t = to_json(*cell.report->threshold);
      t["dataset"] = cell.dataset;
      t["backend"] = cell.backend;
      manifest["thresholds"].push_back(std::move(t));
    }
    if (!cell.report) {
      manifest["unavailable"].push_back({{"dataset", cell.dataset},
                                         {"detector", cell.detector},
                                         {"backend", cell.backend},
                                         {"reason", cell.unavailable_reason},
                                         {"error", cell.failed}});
    }
  }
  report.manifest = std::move(manifest);
  return report;
}

std::string format_metric(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string to_csv(const MatrixReport& report) {
  std::ostringstream out;
  out << "dataset,detector,backend,scenario,accuracy,auroc,tpr@fpr,"
         "realized_fpr,n,n_excluded\n";
  const std::string na(kUnavailable);
  for (const auto& cell : report.cells) {
    out << csv_field(cell.dataset) << ',' << csv_field(cell.detector) << ','
        << csv_field(cell.backend) << ',' << to_string(report.scenario) << ',';
    if (!cell.report) {
      out << na << ',' << na << ',' << na << ',' << na << ',' << na << ','
          << na << '\n';
      continue;
    }
    const EvalReport& r = *cell.report;
    out << (r.accuracy ? format_metric(*r.accuracy) : na) << ','
        << format_metric(r.auroc) << ',' << format_metric(r.tpr_at_fpr.tpr)
        << ',' << format_metric(r.tpr_at_fpr.realized_fpr) << ','
        << r.n_evaluated << ',' << r.n_excluded_degenerate << '\n';
  }
  return out.str();
}

std::string to_markdown(const MatrixReport& report) {
  std::ostringstream out;
  auto table = [&](std::string_view title, auto metric) {
    out << "### " << title << "\n\n| dataset |";
    for (const auto& c : report.cols) out << ' ' << md_cell(c) << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < report.cols.size(); ++i) out << "---|";
    out << '\n';
    for (std::size_t r = 0; r < report.rows.size(); ++r) {
      out << "| " << md_cell(report.rows[r]) << " |";
      for (std::size_t c = 0; c < report.cols.size(); ++c) {
        const MatrixCell& cell = report.at(r, c);
        std::optional<double> v;
        if (cell.report) v = metric(*cell.report);
        out << ' ' << (v ? format_metric(*v) : std::string(kUnavailable)) << " |";
      }
      out << '\n';
    }
    out << '\n';
  };
  out << "## Detection results (" << to_string(report.scenario) << ")\n\n";
  if (!report.auroc_only) {
    table("Accuracy", [](const EvalReport& r) { return r.accuracy; });
  }
  table("AUROC",
        [](const EvalReport& r) { return std::optional<double>(r.auroc); });
  table("TPR at FPR " + format_metric(report.target_fpr),
        [](const EvalReport& r) {
          return std::optional<double>(r.tpr_at_fpr.tpr);
        });
  return out.str();
}

std::string manifest_json(const MatrixReport& report) {
  return report.manifest.dump(2) + "\n";
}

}  // namespace aigt

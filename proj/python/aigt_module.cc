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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aigt/cli.h"
#include "aigt/corpus.h"
#include "aigt/detect.h"
#include "aigt/error.h"
#include "aigt/evalharness.h"
#include "aigt/genkit.h"
#include "aigt/lingstats.h"
#include "aigt/measure.h"
#include "aigt/toy_lm.h"

namespace py = pybind11;

namespace aigt {
namespace {

Orientation orientation_arg(const std::string& s) {
  return parse_orientation(s);
}

py::dict summary_dict(const PositionSummary& s) {
  py::dict d;
  d["token"] = s.token;
  d["observed_logprob"] = s.observed_logprob;
  d["rank"] = s.rank;
  d["dist_entropy"] = s.dist_entropy;
  d["dist_mean_logprob"] = s.dist_mean_logprob;
  d["dist_second_moment"] = s.dist_second_moment;
  d["exact"] = s.exact;
  return d;
}

py::dict threshold_dict(const ThresholdModel& m) {
  py::dict d;
  d["detector"] = m.detector;
  d["threshold"] = m.threshold;
  d["orientation"] = std::string(to_string(m.orientation));
  d["source"] = std::string(to_string(m.source));
  if (m.calibration_accuracy) {
    d["calibration_accuracy"] = *m.calibration_accuracy;
  }
  return d;
}

// Value of a metric detector on `text`; Binoculars needs `performer`.
double detect_text(const std::string& detector, const std::string& text,
                   ToyBackend& backend, ToyBackend* performer) {
  const DetectorId id = parse_detector(detector);
  if (id.kind == DetectorKind::kBlackbox) {
    throw InvalidArgument("black-box detectors are not available here");
  }
  if (id.kind == DetectorKind::kBinoculars) {
    if (performer == nullptr) {
      throw InvalidArgument("binoculars needs a performer backend");
    }
    return score_binoculars(cross_score(text, backend, *performer)).value;
  }
  return score_metric(id.kind, backend.score("", text)).value;
}

py::tuple run_cli_captured(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace
}  // namespace aigt

PYBIND11_MODULE(_aigt, m) {
  using namespace aigt;
  m.doc() = "Detection, evaluation and corpus tools for AI-generated posts.";

  static py::exception<Error> error(m, "Error");
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<UnscorableError>(m, "UnscorableError", error.ptr());
  py::register_exception<RemoteError>(m, "RemoteError", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());

  py::class_<ToyBackend, std::shared_ptr<ToyBackend>>(m, "ToyBackend")
      .def(py::init([](const std::string& name, std::uint64_t seed,
                       std::size_t vocab_size, std::size_t context_window,
                       double logit_scale, bool deterministic) {
             ToyLmConfig cfg;
             cfg.seed = seed;
             cfg.vocab_size = vocab_size;
             cfg.context_window = context_window;
             cfg.logit_scale = logit_scale;
             cfg.deterministic = deterministic;
             return std::make_shared<ToyBackend>(name, cfg);
           }),
           py::arg("name"), py::arg("seed"), py::arg("vocab_size") = 16,
           py::arg("context_window") = 3, py::arg("logit_scale") = 3.0,
           py::arg("deterministic") = false)
      .def_property_readonly("id", &ToyBackend::id)
      .def_property_readonly("tokenizer_id", &ToyBackend::tokenizer_id)
      .def("encode",
           [](const ToyBackend& b, const std::string& text) {
             return b.tokenize(text);
           })
      .def("decode",
           [](const ToyBackend& b, const std::vector<int>& ids) {
             return b.tokenizer().decode(ids);
           })
      .def("score",
           [](ToyBackend& b, const std::string& text) {
             py::list out;
             for (const auto& s : b.score("", text).tokens) {
               out.append(summary_dict(s));
             }
             return out;
           })
      .def(
          "sample",
          [](const ToyBackend& b, std::size_t length, std::uint64_t seed) {
            std::mt19937_64 rng(seed);
            return b.tokenizer().decode(b.lm().sample(length, rng));
          },
          py::arg("length"), py::arg("seed"));

  m.def("detect", &detect_text, py::arg("detector"), py::arg("text"),
        py::arg("backend"), py::arg("performer") = nullptr,
        "Score `text` with a metric detector on a toy backend.");
  m.def("metric_detectors", [] {
    std::vector<std::string> names;
    for (const auto& d : metric_detectors()) names.push_back(d.name());
    return names;
  });
  m.def("orientation_of", [](const std::string& detector) {
    return std::string(to_string(orientation_of(parse_detector(detector))));
  });

  m.def(
      "auroc",
      [](const std::vector<double>& ai, const std::vector<double>& human,
         const std::string& orientation) {
        return auroc(ai, human, orientation_arg(orientation));
      },
      py::arg("ai"), py::arg("human"), py::arg("orientation") = "higher_is_ai");
  m.def(
      "calibrate_threshold",
      [](const std::vector<double>& human, const std::vector<double>& ai,
         const std::string& orientation) {
        return threshold_dict(
            calibrate_threshold(human, ai, orientation_arg(orientation)));
      },
      py::arg("human"), py::arg("ai"), py::arg("orientation") = "higher_is_ai");
  m.def(
      "tpr_at_fpr",
      [](const std::vector<double>& ai, const std::vector<double>& human,
         double target_fpr, const std::string& orientation) {
        const TprAtFpr r =
            tpr_at_fpr(ai, human, orientation_arg(orientation), target_fpr);
        py::dict d;
        d["target_fpr"] = r.target_fpr;
        d["threshold"] = r.threshold;
        d["realized_fpr"] = r.realized_fpr;
        d["tpr"] = r.tpr;
        return d;
      },
      py::arg("ai"), py::arg("human"), py::arg("target_fpr") = 0.01,
      py::arg("orientation") = "higher_is_ai");

  m.def(
      "mann_whitney",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        const MannWhitney mw = mann_whitney(a, b);
        return py::make_tuple(mw.u_b, mw.p_value);
      },
      py::arg("a"), py::arg("b"),
      "Returns (U_b, two-sided p) for groups a and b.");
  m.def("rank_biserial", &rank_biserial, py::arg("u_b"), py::arg("n_a"),
        py::arg("n_b"));
  m.def("band", [](double r) { return std::string(to_string(band(r))); });
  m.def("feature_inventory", &feature_inventory);
  m.def(
      "extract_features",
      [](const std::string& text) {
        static const HeuristicTagger tagger(builtin_lexicons());
        return extract_features(text, builtin_lexicons(), tagger).values;
      },
      py::arg("text"));

  m.def("strip_entities",
        [](const std::string& t) { return strip_entities(t); });
  m.def("strip_scaffolding",
        [](const std::string& t) { return strip_scaffolding(t); });
  m.def("build_paraphrase_prompt",
        [](const std::string& t) { return build_paraphrase_prompt(t); });
  m.def("build_gen10_prompt",
        [](const std::string& t) { return build_gen10_prompt(t); });
  m.def("build_topic_extraction_prompt",
        [](const std::string& t) { return build_topic_extraction_prompt(t); });

  m.def("run_cli", &run_cli_captured, py::arg("args"),
        "Runs the aigt command line; returns (exit_code, stdout, stderr).");
}

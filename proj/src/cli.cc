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

#include "aigt/cli.h"

#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "aigt/backends.h"
#include "aigt/corpus.h"
#include "aigt/error.h"
#include "aigt/genkit.h"
#include "aigt/lingstats.h"
#include "aigt/parallel.h"
#include "aigt/score_cache.h"
#include "aigt/text_util.h"
#include "aigt/toy_lm.h"

namespace aigt {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  try {
    return j.contains(key) ? j[key].get<T>() : fallback;
  } catch (const json::exception& e) {
    throw ParseError(std::string("config field '") + key + "': " + e.what());
  }
}

std::map<std::string, std::string> string_map(const json& j, const char* key) {
  return get_or(j, key, std::map<std::string, std::string>{});
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << content;
  if (!out) throw InvalidArgument("failed writing " + path.string());
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// File-name-safe rendering of an identifier.
std::string slug(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool ok = is_ascii_word(c) || c == '.' || c == '-';
    out += ok ? c : '-';
  }
  return out;
}

std::string short_hash(const std::string& s) { return sha256_hex(s).substr(0, 12); }

json provenance(const RunConfig& cfg) {
  return json{{"config_sha256", cfg.sha256}, {"seed", cfg.seed}};
}

// Shared state for one command: cached backends and classifiers built from
// the config on first use.
class Session {
 public:
  Session(RunConfig cfg, std::ostream& out, std::ostream& err)
      : cfg_(std::move(cfg)), out_(out), err_(err) {}

  const RunConfig& cfg() const { return cfg_; }
  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }

  fs::path report_path(const std::string& name) const {
    return cfg_.report_dir / name;
  }

  ScoreCache& cache() {
    if (!cache_) {
      cache_ = cfg_.cache_dir.empty()
                   ? std::make_shared<ScoreCache>()
                   : std::make_shared<ScoreCache>(cfg_.cache_dir /
                                                  "scores.jsonl");
    }
    return *cache_;
  }

  CachedBackend& backend(const std::string& name) {
    if (auto it = backends_.find(name); it != backends_.end()) {
      return *it->second;
    }
    auto cit = cfg_.backends.find(name);
    if (cit == cfg_.backends.end()) {
      throw InvalidArgument("no backend named '" + name + "' in the config");
    }
    cache();
    // The config hash in the key keeps entries from differently configured
    // backends that share a name apart.
    const std::string key = name + "#" + short_hash(to_json(cit->second).dump());
    auto b = std::make_shared<CachedBackend>(
        std::shared_ptr<MeasurementBackend>(make_backend(cit->second)), cache_,
        key);
    backends_.emplace(name, b);
    return *b;
  }

  BlackboxClassifier& classifier(const std::string& name) {
    if (auto it = classifiers_.find(name); it != classifiers_.end()) {
      return *it->second;
    }
    auto cit = cfg_.classifiers.find(name);
    if (cit == cfg_.classifiers.end()) {
      throw InvalidArgument("no classifier named '" + name + "' in the config");
    }
    auto c = std::make_unique<HttpBlackboxClassifier>(cit->second);
    auto& ref = *c;
    classifiers_.emplace(name, std::move(c));
    return ref;
  }

  void report_cache_stats() {
    for (const auto& [name, b] : backends_) {
      err_ << "backend " << name << ": " << b->hits() << " cache hits, "
           << b->misses() << " misses\n";
    }
  }

  void write_manifest(const std::string& command, json body) {
    body["command"] = command;
    body["provenance"] = provenance(cfg_);
    write_file(report_path(command + "_manifest.json"), body.dump(2) + "\n");
  }

  const Lexicons& lexicons() {
    if (cfg_.lexicon_dir.empty()) return builtin_lexicons();
    if (!lexicons_) lexicons_ = load_lexicons(cfg_.lexicon_dir);
    return *lexicons_;
  }

 private:
  RunConfig cfg_;
  std::ostream& out_;
  std::ostream& err_;
  std::shared_ptr<ScoreCache> cache_;
  std::map<std::string, std::shared_ptr<CachedBackend>> backends_;
  std::map<std::string, std::unique_ptr<BlackboxClassifier>> classifiers_;
  std::optional<Lexicons> lexicons_;
};

struct LoadedDataset {
  std::string id;
  std::vector<TextRecord> records;
};

// Datasets named on the command line: config ids via --dataset, or ad hoc
// corpus files via --input (id = file stem). Defaults to every configured
// dataset.
std::vector<LoadedDataset> load_datasets(const RunConfig& cfg,
                                         const std::vector<std::string>& ids,
                                         const std::vector<std::string>& inputs) {
  std::vector<DatasetEntry> entries;
  for (const auto& id : ids) {
    auto it = std::find_if(cfg.datasets.begin(), cfg.datasets.end(),
                           [&](const DatasetEntry& d) { return d.id == id; });
    if (it == cfg.datasets.end()) {
      throw InvalidArgument("no dataset named '" + id + "' in the config");
    }
    entries.push_back(*it);
  }
  for (const auto& p : inputs) {
    entries.push_back({fs::path(p).stem().string(), fs::path(p)});
  }
  if (ids.empty() && inputs.empty()) entries = cfg.datasets;
  if (entries.empty()) throw InvalidArgument("no datasets given");
  std::vector<LoadedDataset> out;
  for (const auto& e : entries) out.push_back({e.id, load_corpus(e.path)});
  return out;
}

std::vector<TextRecord> select_split(const RunConfig& cfg,
                                     const std::vector<TextRecord>& records,
                                     const std::string& which) {
  if (which == "all") return records;
  const Split split =
      split_dataset(records, SplitSpec{cfg.train_per_class, cfg.seed});
  if (which == "train") return split.train;
  if (which == "test") return split.test;
  throw InvalidArgument("unknown split '" + which + "'");
}

std::vector<DetectorId> resolve_detectors(const RunConfig& cfg,
                                          const std::vector<std::string>& names) {
  const auto& list = names.empty() ? cfg.detectors : names;
  std::vector<DetectorId> out;
  if (list.empty()) return metric_detectors();
  for (const auto& n : list) out.push_back(parse_detector(n));
  return out;
}

std::string default_backend(const RunConfig& cfg) {
  if (cfg.backends.size() == 1) return cfg.backends.begin()->first;
  throw InvalidArgument("several backends configured; pass --backend");
}

// ---------------------------------------------------------------------------
// Commands

struct IngestArgs {
  std::string input;
  std::string output;
  bool no_strip_entities = false;
  bool no_strip_scaffolding = false;
  bool filter_refusals = false;
  bool filter_tags = false;
  bool condense = false;
  bool keep_unpaired = false;
};

int cmd_ingest(Session& s, const IngestArgs& a) {
  const auto& cfg = s.cfg();
  IngestOptions opts;
  opts.strip_entities = !a.no_strip_entities;
  opts.strip_scaffolding = !a.no_strip_scaffolding;
  opts.condense_gen10 = a.condense;
  opts.drop_unpaired = !a.keep_unpaired;
  if (a.filter_refusals) {
    opts.refusal_lexicon = cfg.refusal_lexicon_path.empty()
                               ? default_refusal_lexicon()
                               : load_phrase_list(cfg.refusal_lexicon_path);
  }
  if (a.filter_tags) {
    opts.tag_conditions = cfg.tag_condition_path.empty()
                              ? default_tag_conditions()
                              : load_tag_conditions(cfg.tag_condition_path);
  }
  const IngestResult result = ingest(load_corpus(a.input), opts);
  save_corpus(a.output, result.records);

  json summary = result.summary.to_json();
  summary["provenance"] = provenance(cfg);
  write_file(s.report_path("ingest_summary.json"), summary.dump(2) + "\n");
  s.write_manifest("ingest", json{{"outputs", {"ingest_summary.json"}},
                                  {"corpus", a.output}});
  s.out() << result.summary.to_json().dump(2) << "\n";
  return 0;
}

struct GenerateArgs {
  std::string input;
  std::string output;
  std::string strategy = "paraphrase";
  int iterations = 3;
  std::string generator;
  bool dry_run = false;
};

int cmd_generate(Session& s, const GenerateArgs& a) {
  const auto& cfg = s.cfg();
  const auto records = load_corpus(a.input);
  const CampaignStrategy strategy = parse_campaign_strategy(a.strategy);
  if (a.dry_run) {
    for (const auto& p : plan_campaign_prompts(records, strategy)) {
      s.out() << p << "\n----\n";
    }
    return 0;
  }
  if (!cfg.chat) throw InvalidArgument("generate needs a 'chat' config block");
  if (a.output.empty()) throw InvalidArgument("generate needs --output");
  HttpChatClient client(*cfg.chat);
  CampaignOptions opts;
  opts.strategy = strategy;
  opts.iterations = a.iterations;
  opts.generation = cfg.generation;
  opts.generator = a.generator.empty() ? cfg.generation.model : a.generator;
  opts.max_parallel = cfg.parallel;
  opts.retry = cfg.chat->retry;
  const CampaignResult result = run_generation_campaign(records, client, opts);
  save_corpus(a.output, result.records);

  json failures = json::array();
  for (const auto& f : result.failures) {
    failures.push_back(
        {{"pair_id", f.pair_id}, {"stage", f.stage}, {"reason", f.reason}});
    s.err() << "generation failed for pair " << f.pair_id << " at " << f.stage
            << ": " << f.reason << "\n";
  }
  s.write_manifest("generate", json{{"strategy", a.strategy},
                                    {"iterations", a.iterations},
                                    {"generator", opts.generator},
                                    {"records", result.records.size()},
                                    {"corpus", a.output},
                                    {"failures", failures}});
  return result.failures.empty() ? 0 : 1;
}

struct ScoreArgs {
  std::vector<std::string> backends;
  std::vector<std::string> datasets;
  std::vector<std::string> inputs;
  bool dry_run = false;
};

int cmd_score(Session& s, const ScoreArgs& a) {
  const auto& cfg = s.cfg();
  std::vector<std::string> names = a.backends;
  if (names.empty()) {
    for (const auto& [n, _] : cfg.backends) names.push_back(n);
  }
  if (names.empty()) throw InvalidArgument("no backends configured");
  const auto datasets = load_datasets(cfg, a.datasets, a.inputs);

  if (a.dry_run) {
    for (const auto& name : names) {
      const BackendConfig& bc = cfg.backends.at(name);
      for (const auto& d : datasets) {
        if (bc.kind != BackendKind::kRemote) {
          s.out() << name << ": " << d.records.size() << " records from "
                  << d.id << " (local backend, no requests)\n";
          continue;
        }
        RemoteBackend remote(bc);
        for (const auto& r : d.records) {
          s.out() << remote.request_body(r.text).dump() << "\n";
        }
      }
    }
    return 0;
  }

  std::size_t errors = 0;
  json outputs = json::array();
  for (const auto& name : names) {
    CachedBackend& backend = s.backend(name);
    for (const auto& d : datasets) {
      std::vector<std::optional<ScoreSequence>> seqs(d.records.size());
      std::vector<std::string> failures(d.records.size());
      parallel_for(d.records.size(), cfg.parallel, [&](std::size_t i) {
        try {
          seqs[i] = backend.score(d.records[i].id, d.records[i].text);
        } catch (const Error& e) {
          failures[i] = e.what();
        }
      });
      std::string body;
      for (std::size_t i = 0; i < seqs.size(); ++i) {
        if (seqs[i]) {
          body += to_json(*seqs[i]).dump() + "\n";
        } else {
          ++errors;
          s.err() << name << ": " << d.records[i].id << ": " << failures[i]
                  << "\n";
        }
      }
      const std::string file = "scores_" + slug(d.id) + "_" + slug(name) + ".jsonl";
      write_file(s.report_path(file), body);
      outputs.push_back(file);
    }
  }
  s.report_cache_stats();
  s.write_manifest("score", json{{"outputs", outputs}, {"errors", errors}});
  return errors == 0 ? 0 : 1;
}

struct DetectArgs {
  std::vector<std::string> detectors;
  std::string backend;
  std::vector<std::string> datasets;
  std::vector<std::string> inputs;
  std::string split = "all";
  bool dry_run = false;
};

int cmd_detect(Session& s, const DetectArgs& a) {
  const auto& cfg = s.cfg();
  const auto detectors = resolve_detectors(cfg, a.detectors);
  const auto datasets = load_datasets(cfg, a.datasets, a.inputs);
  bool needs_backend = false;
  for (const auto& d : detectors) {
    needs_backend |= d.kind != DetectorKind::kBlackbox;
  }
  const std::string backend_name =
      !needs_backend ? std::string("n/a")
                     : (a.backend.empty() ? default_backend(cfg) : a.backend);

  if (a.dry_run) {
    for (const auto& d : datasets) {
      const auto records = select_split(cfg, d.records, a.split);
      for (const auto& det : detectors) {
        s.out() << d.id << " " << det.name() << " "
                << (det.kind == DetectorKind::kBlackbox ? "n/a" : backend_name)
                << ": " << records.size() << " records\n";
      }
    }
    return 0;
  }

  std::size_t degenerate = 0;
  json outputs = json::array();
  for (const auto& d : datasets) {
    const auto records = select_split(cfg, d.records, a.split);
    for (const auto& det : detectors) {
      DetectorContext ctx;
      ctx.max_parallel = cfg.parallel;
      std::string used = "n/a";
      if (det.kind == DetectorKind::kBlackbox) {
        ctx.classifier = &s.classifier(det.blackbox_name);
      } else {
        used = backend_name;
        ctx.backend = &s.backend(backend_name);
        if (det.kind == DetectorKind::kBinoculars) {
          auto it = cfg.binoculars.find(backend_name);
          if (it == cfg.binoculars.end()) {
            throw InvalidArgument("no binoculars performer configured for '" +
                                  backend_name + "'");
          }
          ctx.performer = &s.backend(it->second);
        }
      }
      const auto scores = detect_records(det, records, ctx);
      json doc{{"dataset", d.id},
               {"detector", det.name()},
               {"backend", used},
               {"orientation", to_string(orientation_of(det))},
               {"split", a.split},
               {"provenance", provenance(cfg)},
               {"scores", json::array()}};
      for (const auto& sc : scores) {
        if (sc.degenerate) ++degenerate;
        doc["scores"].push_back(to_json(sc));
      }
      const std::string file = "detect_" + slug(d.id) + "_" + slug(det.name()) +
                               "_" + slug(used) + "_" + slug(a.split) + ".json";
      write_file(s.report_path(file), doc.dump(2) + "\n");
      outputs.push_back(file);
    }
  }
  s.report_cache_stats();
  s.write_manifest("detect",
                   json{{"outputs", outputs}, {"degenerate", degenerate}});
  return 0;
}

struct ScoreFile {
  std::string dataset;
  DetectorId detector;
  std::string backend;
  std::vector<RecordScore> scores;
};

ScoreFile read_score_file(const std::string& path) {
  const json doc = read_json_file(path);
  ScoreFile f;
  try {
    f.dataset = doc.at("dataset").get<std::string>();
    f.detector = parse_detector(doc.at("detector").get<std::string>());
    f.backend = doc.at("backend").get<std::string>();
    for (const auto& j : doc.at("scores")) {
      f.scores.push_back(record_score_from_json(j));
    }
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return f;
}

struct CalibrateArgs {
  std::string scores;
  std::string output;
};

int cmd_calibrate(Session& s, const CalibrateArgs& a) {
  const ScoreFile f = read_score_file(a.scores);
  const ThresholdModel model = calibrate_on(f.scores, f.detector);
  json doc = to_json(model);
  doc["dataset"] = f.dataset;
  doc["backend"] = f.backend;
  doc["provenance"] = provenance(s.cfg());
  const fs::path out = a.output.empty()
                           ? s.report_path("threshold_" + slug(f.detector.name()) +
                                           "_" + slug(f.backend) + ".json")
                           : fs::path(a.output);
  write_file(out, doc.dump(2) + "\n");
  s.write_manifest("calibrate", json{{"threshold_file", out.string()}});
  s.out() << doc.dump(2) << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string scores;
  std::string threshold;
};

int cmd_evaluate(Session& s, const EvaluateArgs& a) {
  const auto& cfg = s.cfg();
  const ScoreFile f = read_score_file(a.scores);
  std::optional<ThresholdModel> threshold;
  if (!a.threshold.empty()) {
    threshold = threshold_model_from_json(read_json_file(a.threshold));
    if (threshold->detector != f.detector.name()) {
      throw InvalidArgument("threshold is for '" + threshold->detector +
                            "', scores are for '" + f.detector.name() + "'");
    }
  } else if (cfg.scenario == Scenario::kOffTheShelf) {
    threshold = default_threshold(f.detector);
  }
  const EvalReport report =
      evaluate(f.dataset, f.detector, f.backend, f.scores, threshold,
               cfg.target_fpr);
  json doc = to_json(report);
  doc["scenario"] = to_string(cfg.scenario);
  doc["provenance"] = provenance(cfg);
  const std::string file = "eval_" + slug(f.dataset) + "_" +
                           slug(f.detector.name()) + "_" + slug(f.backend) +
                           ".json";
  write_file(s.report_path(file), doc.dump(2) + "\n");
  s.write_manifest("evaluate", json{{"outputs", {file}}});
  s.out() << doc.dump(2) << "\n";
  return 0;
}

struct MatrixArgs {
  bool auroc_only = false;
  std::string layout;
  bool dry_run = false;
};

int cmd_matrix(Session& s, const MatrixArgs& a) {
  const auto& cfg = s.cfg();
  const std::string layout = a.layout.empty() ? cfg.matrix_layout : a.layout;
  if (layout != "cross" && layout != "own") {
    throw InvalidArgument("unknown matrix layout '" + layout + "'");
  }
  MatrixSpec spec;
  spec.scenario = cfg.scenario;
  spec.auroc_only = a.auroc_only;
  spec.target_fpr = cfg.target_fpr;
  spec.seed = cfg.seed;
  spec.detectors = resolve_detectors(cfg, {});
  spec.own_model = layout == "own";
  spec.own_backend = cfg.own_backend;
  spec.binoculars_performer = cfg.binoculars;
  spec.max_parallel = cfg.parallel;
  spec.backends = cfg.matrix_backends;
  if (spec.backends.empty()) {
    for (const auto& [n, _] : cfg.backends) spec.backends.push_back(n);
  }

  std::vector<MatrixDataset> datasets;
  for (const auto& d : load_datasets(cfg, {}, {})) {
    // Both scenarios are scored on the same held-out test split so the two
    // matrices are comparable; only the idealized one reads train.
    Split split =
        split_dataset(d.records, SplitSpec{cfg.train_per_class, cfg.seed});
    datasets.push_back({d.id, std::move(split.train), std::move(split.test)});
  }

  if (a.dry_run) {
    for (const auto& d : datasets) {
      s.out() << d.id << ": " << d.train.size() << " train, " << d.test.size()
              << " test records\n";
    }
    for (const auto& det : spec.detectors) s.out() << "detector " << det.name() << "\n";
    for (const auto& b : spec.backends) s.out() << "backend " << b << "\n";
    return 0;
  }

  MatrixResources res;
  std::set<std::string> needed(spec.backends.begin(), spec.backends.end());
  for (const auto& [_, b] : spec.own_backend) needed.insert(b);
  for (const auto& [o, p] : spec.binoculars_performer) {
    if (needed.contains(o)) needed.insert(p);
  }
  for (const auto& name : needed) {
    if (!cfg.backends.contains(name)) continue;
    res.backends[name] = &s.backend(name);
    res.backend_configs[name] = to_json(cfg.backends.at(name));
  }
  for (const auto& det : spec.detectors) {
    if (det.kind == DetectorKind::kBlackbox) {
      res.classifiers[det.blackbox_name] = &s.classifier(det.blackbox_name);
    }
  }
  res.extra_manifest = provenance(cfg);

  MatrixReport report = run_matrix(datasets, spec, res);
  report.manifest["command"] = "matrix";
  report.manifest["provenance"] = provenance(cfg);
  const std::string stem = a.auroc_only ? "matrix_auroc" : "matrix";
  write_file(s.report_path(stem + ".csv"), to_csv(report));
  write_file(s.report_path(stem + ".md"), to_markdown(report));
  write_file(s.report_path(stem + "_manifest.json"), manifest_json(report));
  s.report_cache_stats();

  std::size_t failed = 0;
  for (const auto& c : report.cells) {
    if (!c.failed) continue;
    ++failed;
    s.err() << "cell " << c.dataset << " / " << c.detector << " / " << c.backend
            << " failed: " << c.unavailable_reason << "\n";
  }
  s.out() << to_markdown(report);
  return failed == 0 ? 0 : 1;
}

struct LingstatsArgs {
  std::vector<std::string> inputs;
  std::string human;
  std::string ai;
  std::string name = "lingstats";
};

int cmd_lingstats(Session& s, const LingstatsArgs& a) {
  const auto& cfg = s.cfg();
  std::vector<TextRecord> human;
  std::vector<TextRecord> ai;
  auto take = [](const std::string& path, Label label,
                 std::vector<TextRecord>& dst) {
    for (auto& r : load_corpus(path)) {
      if (r.label == label) dst.push_back(std::move(r));
    }
  };
  for (const auto& p : a.inputs) {
    take(p, Label::kHuman, human);
    take(p, Label::kAi, ai);
  }
  if (!a.human.empty()) take(a.human, Label::kHuman, human);
  if (!a.ai.empty()) take(a.ai, Label::kAi, ai);
  if (human.empty() || ai.empty()) {
    throw InvalidArgument("lingstats needs human and AI records (got " +
                          std::to_string(human.size()) + " and " +
                          std::to_string(ai.size()) + ")");
  }
  const Lexicons& lex = s.lexicons();
  HeuristicTagger tagger(lex);
  const auto fh = extract_corpus_features(human, lex, tagger, cfg.parallel);
  const auto fa = extract_corpus_features(ai, lex, tagger, cfg.parallel);
  EffectSizeReport report = compare_corpora(fh, fa, feature_inventory());
  report.metadata["provenance"] = provenance(cfg);
  report.metadata["lexicons"] =
      cfg.lexicon_dir.empty() ? "builtin" : cfg.lexicon_dir.string();
  write_file(s.report_path(a.name + ".csv"), to_csv(report));
  write_file(s.report_path(a.name + ".md"), to_markdown(report));
  s.write_manifest(a.name, json{{"outputs", {a.name + ".csv", a.name + ".md"}},
                                {"n_human", report.n_human},
                                {"n_ai", report.n_ai},
                                {"metadata", report.metadata}});
  s.out() << to_markdown(report);
  return 0;
}

struct SynthArgs {
  std::string output_dir;
  std::size_t pairs = 200;
  std::uint64_t seed = 7;
};

// Writes a self-contained toy experiment: two generator corpora sharing one
// set of human texts, and a config wiring the matching toy backends.
int cmd_synth(std::ostream& out, const SynthArgs& a) {
  if (a.pairs < 2) throw InvalidArgument("synth needs at least 2 pairs");
  const fs::path dir(a.output_dir);
  fs::create_directories(dir);
  const ToyLmConfig human{101, 16, 3, false, 3.0};
  const std::vector<std::pair<std::string, ToyLmConfig>> gens = {
      {"g1", {1, 16, 3, false, 3.0}}, {"g2", {2, 16, 3, false, 3.0}}};
  json cfg{{"seed", a.seed},
           {"detectors", json::array()},
           {"datasets", json::array()},
           {"backends", json::object()},
           {"binoculars", {{"g1", "g2"}, {"g2", "g1"}}},
           {"own_backend", {{"g1", "g1"}, {"g2", "g2"}}},
           {"matrix", {{"layout", "own"}}},
           {"split", {{"train_per_class", a.pairs / 2}}},
           {"scenario", "idealized"},
           {"cache_dir", "cache"},
           {"report_dir", "reports"},
           {"parallel", 1}};
  for (const auto& d : metric_detectors()) cfg["detectors"].push_back(d.name());
  for (const auto& [name, lm] : gens) {
    ToyCorpusSpec spec{name, human, lm, a.pairs, 16, 48, a.seed};
    save_corpus(dir / (name + ".jsonl"), make_toy_corpus(spec));
    cfg["datasets"].push_back({{"id", name}, {"path", name + ".jsonl"}});
    cfg["backends"][name] = {{"kind", "toy"},
                             {"seed", lm.seed},
                             {"vocab_size", lm.vocab_size},
                             {"context_window", lm.context_window},
                             {"logit_scale", lm.logit_scale}};
  }
  write_file(dir / "config.json", cfg.dump(2) + "\n");
  out << "wrote " << (dir / "config.json").string() << "\n";
  return 0;
}

}  // namespace

// ---------------------------------------------------------------------------

RunConfig run_config_from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  RunConfig c;
  c.base_dir = base_dir;
  c.raw = j;
  c.sha256 = sha256_hex(j.dump());
  c.seed = get_or<std::uint64_t>(j, "seed", 0);
  if (j.contains("backends")) {
    for (const auto& [name, bj] : j["backends"].items()) {
      c.backends.emplace(name, backend_config_from_json(name, bj));
    }
  }
  if (j.contains("classifiers")) {
    for (const auto& [name, cj] : j["classifiers"].items()) {
      c.classifiers.emplace(name, blackbox_config_from_json(name, cj));
    }
  }
  if (j.contains("chat")) {
    const json& cj = j["chat"];
    HttpChatClient::Config chat;
    chat.endpoint_url = get_or<std::string>(cj, "endpoint_url", "");
    chat.api_key_env = get_or<std::string>(cj, "api_key_env", "");
    chat.timeout_seconds = get_or(cj, "timeout_seconds", chat.timeout_seconds);
    if (cj.contains("retry")) {
      chat.retry.max_attempts =
          get_or(cj["retry"], "max_attempts", chat.retry.max_attempts);
      chat.retry.base_backoff_ms =
          get_or(cj["retry"], "base_backoff_ms", chat.retry.base_backoff_ms);
    }
    if (chat.endpoint_url.empty()) {
      throw InvalidArgument("chat config needs endpoint_url");
    }
    c.chat = chat;
    c.generation.model = get_or<std::string>(cj, "model", "");
    c.generation.temperature = get_or(cj, "temperature", c.generation.temperature);
    c.generation.max_tokens = get_or(cj, "max_tokens", c.generation.max_tokens);
    if (cj.contains("top_p")) c.generation.top_p = get_or(cj, "top_p", 1.0);
  }
  c.detectors = get_or(j, "detectors", std::vector<std::string>{});
  for (const auto& d : c.detectors) parse_detector(d);
  if (j.contains("datasets")) {
    for (const auto& dj : j["datasets"]) {
      DatasetEntry e;
      if (dj.is_string()) {
        e.path = resolve(base_dir, dj.get<std::string>());
        e.id = e.path.stem().string();
      } else {
        e.path = resolve(base_dir, get_or<std::string>(dj, "path", ""));
        e.id = get_or<std::string>(dj, "id", e.path.stem().string());
      }
      c.datasets.push_back(std::move(e));
    }
  }
  c.scenario = parse_scenario(get_or<std::string>(j, "scenario", "idealized"));
  c.target_fpr = get_or(j, "target_fpr", c.target_fpr);
  c.cache_dir = resolve(base_dir, get_or<std::string>(j, "cache_dir", ""));
  c.report_dir = resolve(base_dir, get_or<std::string>(j, "report_dir", "reports"));
  c.tag_condition_path =
      resolve(base_dir, get_or<std::string>(j, "tag_condition_path", ""));
  c.lexicon_dir = resolve(base_dir, get_or<std::string>(j, "lexicon_dir", ""));
  c.refusal_lexicon_path =
      resolve(base_dir, get_or<std::string>(j, "refusal_lexicon_path", ""));
  c.binoculars = string_map(j, "binoculars");
  c.own_backend = string_map(j, "own_backend");
  if (j.contains("matrix")) {
    c.matrix_layout = get_or<std::string>(j["matrix"], "layout", c.matrix_layout);
    c.matrix_backends =
        get_or(j["matrix"], "backends", std::vector<std::string>{});
  }
  if (j.contains("split")) {
    c.train_per_class =
        get_or(j["split"], "train_per_class", c.train_per_class);
  }
  c.parallel = std::max<std::size_t>(1, get_or(j, "parallel", c.parallel));

  for (const auto& [o, p] : c.binoculars) {
    if (!c.backends.contains(o) || !c.backends.contains(p)) {
      throw InvalidArgument("binoculars pair " + o + " -> " + p +
                            " names an unknown backend");
    }
  }
  for (const auto& b : c.matrix_backends) {
    if (!c.backends.contains(b)) {
      throw InvalidArgument("matrix backend '" + b + "' is not configured");
    }
  }
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  const json j = read_json_file(path);
  return run_config_from_json(j, fs::absolute(path).parent_path());
}

void check_paths(const RunConfig& c) {
  auto require = [](const fs::path& p, const std::string& what) {
    if (!p.empty() && !fs::exists(p)) {
      throw InvalidArgument(what + " not found: " + p.string());
    }
  };
  for (const auto& d : c.datasets) require(d.path, "dataset '" + d.id + "'");
  require(c.tag_condition_path, "tag_condition_path");
  require(c.lexicon_dir, "lexicon_dir");
  require(c.refusal_lexicon_path, "refusal_lexicon_path");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"aigt: detection and profiling of AI-generated social media text"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> parallel;
  std::string report_dir;
  std::string cache_dir;
  std::string scenario;
  app.add_option("--config", config_path, "Run config (JSON)")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--parallel", parallel, "Bound on in-flight work");
  app.add_option("--report-dir", report_dir, "Override report_dir");
  app.add_option("--cache-dir", cache_dir, "Override cache_dir");
  app.add_option("--scenario", scenario, "idealized or off_the_shelf");

  IngestArgs ingest_a;
  auto* ingest_c = app.add_subcommand("ingest", "Validate, filter and balance a corpus");
  ingest_c->add_option("--input", ingest_a.input)->required()->check(CLI::ExistingFile);
  ingest_c->add_option("--output", ingest_a.output)->required();
  ingest_c->add_flag("--no-strip-entities", ingest_a.no_strip_entities);
  ingest_c->add_flag("--no-strip-scaffolding", ingest_a.no_strip_scaffolding);
  ingest_c->add_flag("--filter-refusals", ingest_a.filter_refusals);
  ingest_c->add_flag("--filter-tags", ingest_a.filter_tags);
  ingest_c->add_flag("--condense-gen10", ingest_a.condense);
  ingest_c->add_flag("--keep-unpaired", ingest_a.keep_unpaired);

  GenerateArgs gen_a;
  auto* gen_c = app.add_subcommand("generate", "Run a generation campaign");
  gen_c->add_option("--input", gen_a.input)->required()->check(CLI::ExistingFile);
  gen_c->add_option("--output", gen_a.output);
  gen_c->add_option("--strategy", gen_a.strategy)
      ->check(CLI::IsMember({"paraphrase", "gen10", "topic"}));
  gen_c->add_option("--iterations", gen_a.iterations)->check(CLI::Range(1, 3));
  gen_c->add_option("--generator", gen_a.generator);
  gen_c->add_flag("--dry-run", gen_a.dry_run, "Print prompts without calls");

  ScoreArgs score_a;
  auto* score_c = app.add_subcommand("score", "Fill the score cache");
  score_c->add_option("--backend", score_a.backends);
  score_c->add_option("--dataset", score_a.datasets);
  score_c->add_option("--input", score_a.inputs)->check(CLI::ExistingFile);
  score_c->add_flag("--dry-run", score_a.dry_run);

  DetectArgs detect_a;
  auto* detect_c = app.add_subcommand("detect", "Score records with detectors");
  detect_c->add_option("--detector", detect_a.detectors);
  detect_c->add_option("--backend", detect_a.backend);
  detect_c->add_option("--dataset", detect_a.datasets);
  detect_c->add_option("--input", detect_a.inputs)->check(CLI::ExistingFile);
  detect_c->add_option("--split", detect_a.split)
      ->check(CLI::IsMember({"all", "train", "test"}));
  detect_c->add_flag("--dry-run", detect_a.dry_run);

  CalibrateArgs cal_a;
  auto* cal_c = app.add_subcommand("calibrate", "Fit a threshold on detector scores");
  cal_c->add_option("--scores", cal_a.scores)->required()->check(CLI::ExistingFile);
  cal_c->add_option("--output", cal_a.output);

  EvaluateArgs eval_a;
  auto* eval_c = app.add_subcommand("evaluate", "Evaluate detector scores");
  eval_c->add_option("--scores", eval_a.scores)->required()->check(CLI::ExistingFile);
  eval_c->add_option("--threshold", eval_a.threshold)->check(CLI::ExistingFile);

  MatrixArgs matrix_a;
  auto* matrix_c = app.add_subcommand("matrix", "Dataset x detector/backend matrix");
  matrix_c->add_flag("--auroc-only", matrix_a.auroc_only);
  matrix_c->add_option("--layout", matrix_a.layout)
      ->check(CLI::IsMember({"cross", "own"}));
  matrix_c->add_flag("--dry-run", matrix_a.dry_run);

  LingstatsArgs ling_a;
  auto* ling_c = app.add_subcommand("lingstats", "Linguistic effect sizes");
  ling_c->add_option("--input", ling_a.inputs)->check(CLI::ExistingFile);
  ling_c->add_option("--human", ling_a.human)->check(CLI::ExistingFile);
  ling_c->add_option("--ai", ling_a.ai)->check(CLI::ExistingFile);
  ling_c->add_option("--name", ling_a.name, "Report file stem");

  SynthArgs synth_a;
  auto* synth_c = app.add_subcommand("synth", "Write a toy experiment");
  synth_c->add_option("--output-dir", synth_a.output_dir)->required();
  synth_c->add_option("--pairs", synth_a.pairs);
  synth_c->add_option("--seed", synth_a.seed);

  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  storage.insert(storage.begin(), "aigt");
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (synth_c->parsed()) return cmd_synth(out, synth_a);

    json raw = config_path.empty() ? json::object() : read_json_file(config_path);
    if (!raw.is_object()) throw ParseError("config must be a JSON object");
    if (seed) raw["seed"] = *seed;
    if (parallel) raw["parallel"] = *parallel;
    if (!scenario.empty()) raw["scenario"] = scenario;
    const fs::path cwd = fs::current_path();
    // Overrides given on the command line are relative to the working
    // directory, not the config file.
    if (!report_dir.empty()) raw["report_dir"] = fs::absolute(report_dir).string();
    if (!cache_dir.empty()) raw["cache_dir"] = fs::absolute(cache_dir).string();
    const fs::path base =
        config_path.empty() ? cwd : fs::absolute(config_path).parent_path();
    RunConfig cfg = run_config_from_json(raw, base);
    check_paths(cfg);
    Session session(std::move(cfg), out, err);

    if (ingest_c->parsed()) return cmd_ingest(session, ingest_a);
    if (gen_c->parsed()) return cmd_generate(session, gen_a);
    if (score_c->parsed()) return cmd_score(session, score_a);
    if (detect_c->parsed()) return cmd_detect(session, detect_a);
    if (cal_c->parsed()) return cmd_calibrate(session, cal_a);
    if (eval_c->parsed()) return cmd_evaluate(session, eval_a);
    if (matrix_c->parsed()) return cmd_matrix(session, matrix_a);
    if (ling_c->parsed()) return cmd_lingstats(session, ling_a);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace aigt

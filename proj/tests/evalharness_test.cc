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
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aigt/error.h"
#include "aigt/toy_lm.h"
#include "gtest/gtest.h"
#include "test_support.h"

namespace aigt {
namespace {

constexpr Orientation kHigher = Orientation::kHigherIsAi;
constexpr Orientation kLower = Orientation::kLowerIsAi;
constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Calibrate, Examples) {
  const ThresholdModel a = calibrate_threshold({1, 2, 3}, {4, 5, 6}, kHigher);
  EXPECT_DOUBLE_EQ(a.threshold, 3.5);
  EXPECT_DOUBLE_EQ(*a.calibration_accuracy, 1.0);

  const ThresholdModel b = calibrate_threshold({1, 3}, {2, 4}, kHigher);
  EXPECT_DOUBLE_EQ(b.threshold, 1.5);
  EXPECT_DOUBLE_EQ(*b.calibration_accuracy, 0.75);

  const ThresholdModel c = calibrate_threshold({5}, {5}, kHigher);
  EXPECT_EQ(c.threshold, -kInf);
  EXPECT_DOUBLE_EQ(*c.calibration_accuracy, 0.5);

  EXPECT_THROW(calibrate_threshold({}, {1}, kHigher), InvalidArgument);
}

TEST(Calibrate, LowerIsAiMirrors) {
  const ThresholdModel m = calibrate_threshold({4, 5, 6}, {1, 2, 3}, kLower);
  EXPECT_DOUBLE_EQ(m.threshold, 3.5);
  EXPECT_TRUE(m.is_ai(3.0));
  EXPECT_FALSE(m.is_ai(3.5));  // equality is human
  EXPECT_FALSE(m.is_ai(4.0));
}

TEST(Calibrate, BeatsEveryCandidateAndPicksSmallestOptimum) {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 300; ++round) {
    const bool ties = round % 2 == 0;
    const auto h = testing::random_scores(rng, testing::random_size(rng, 1, 40),
                                          ties);
    const auto a = testing::random_scores(rng, testing::random_size(rng, 1, 40),
                                          ties, 1.0);
    const Orientation o = testing::random_orientation(rng);
    const ThresholdModel m = calibrate_threshold(h, a, o);
    const double got = testing::brute_balanced_accuracy(h, a, m.threshold, o);
    EXPECT_NEAR(got, *m.calibration_accuracy, 1e-12);
    double best = -1.0;
    double best_t = kInf;
    for (double t : testing::candidate_thresholds(h, a)) {
      const double v = testing::brute_balanced_accuracy(h, a, t, o);
      EXPECT_LE(v, got + 1e-12);
      if (v > best + 1e-12) {
        best = v;
        best_t = t;
      }
    }
    EXPECT_EQ(m.threshold, best_t);
    EXPECT_GE(got, 0.5);
  }
}

TEST(Auroc, Examples) {
  EXPECT_DOUBLE_EQ(auroc({0.9, 0.8}, {0.7, 0.1}, kHigher), 1.0);
  EXPECT_DOUBLE_EQ(auroc({0.9, 0.4}, {0.6, 0.2}, kHigher), 0.75);
  EXPECT_DOUBLE_EQ(auroc({0.5}, {0.5}, kHigher), 0.5);
  EXPECT_DOUBLE_EQ(auroc({0.9, 0.8}, {0.7, 0.1}, kLower), 0.0);
  EXPECT_THROW(auroc({}, {1.0}, kHigher), InvalidArgument);
}

TEST(Auroc, MatchesPairwiseOracleAndProperties) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 300; ++round) {
    const bool ties = round % 3 != 0;
    const auto a = testing::random_scores(rng, testing::random_size(rng, 1, 60),
                                          ties);
    const auto h = testing::random_scores(rng, testing::random_size(rng, 1, 60),
                                          ties);
    const Orientation o = testing::random_orientation(rng);
    const double v = auroc(a, h, o);
    EXPECT_NEAR(v, testing::pairwise_auroc(a, h, o), 1e-12);
    EXPECT_NEAR(v + auroc(h, a, o), 1.0, 1e-12);
    std::vector<double> ta = a;
    std::vector<double> th = h;
    for (double& x : ta) x = std::exp(x / 3.0) + 2.0;
    for (double& x : th) x = std::exp(x / 3.0) + 2.0;
    EXPECT_NEAR(auroc(ta, th, o), v, 1e-12);
  }
}

TEST(TprAtFpr, Examples) {
  const TprAtFpr r = tpr_at_fpr({0.35, 0.5}, {0.1, 0.2, 0.3, 0.4}, kHigher, 0.25);
  EXPECT_DOUBLE_EQ(r.realized_fpr, 0.25);
  EXPECT_DOUBLE_EQ(r.tpr, 1.0);

  const TprAtFpr sep = tpr_at_fpr({5, 6}, {1, 2}, kHigher, 0.3);
  EXPECT_DOUBLE_EQ(sep.tpr, 1.0);
  EXPECT_DOUBLE_EQ(sep.realized_fpr, 0.0);

  std::vector<double> human(10);
  for (int i = 0; i < 10; ++i) human[i] = i;
  const TprAtFpr strict = tpr_at_fpr({9.5, 3.0}, human, kHigher, 0.01);
  EXPECT_DOUBLE_EQ(strict.realized_fpr, 0.0);
  EXPECT_GE(strict.threshold, 9.0);
  EXPECT_DOUBLE_EQ(strict.tpr, 0.5);

  EXPECT_THROW(tpr_at_fpr({1}, {0}, kHigher, 0.0), InvalidArgument);
  EXPECT_THROW(tpr_at_fpr({1}, {0}, kHigher, 1.0), InvalidArgument);
}

TEST(TprAtFpr, ContractOnRandomInstances) {
  std::mt19937_64 rng(23);
  const std::vector<double> targets = {0.01, 0.05, 0.1, 0.25, 0.5, 0.9};
  for (int round = 0; round < 300; ++round) {
    const bool ties = round % 2 == 0;
    const auto a = testing::random_scores(rng, testing::random_size(rng, 1, 50),
                                          ties, 0.5);
    const auto h = testing::random_scores(rng, testing::random_size(rng, 1, 50),
                                          ties);
    const Orientation o = testing::random_orientation(rng);
    double prev = -1.0;
    for (double t : targets) {
      const TprAtFpr r = tpr_at_fpr(a, h, o, t);
      EXPECT_LE(r.realized_fpr, t + 1e-12);
      EXPECT_GE(r.tpr, prev);
      prev = r.tpr;
      const testing::RatePair best = testing::brute_tpr_at_fpr(a, h, o, t);
      EXPECT_NEAR(r.tpr, best.tpr, 1e-12);
    }
  }
}

TEST(DefaultThreshold, ShippedValues) {
  const auto bb = default_threshold(parse_detector("blackbox:x"));
  ASSERT_TRUE(bb.has_value());
  EXPECT_DOUBLE_EQ(bb->threshold, 0.5);
  EXPECT_EQ(bb->source, ThresholdSource::kFixedDefault);
  const auto bino = default_threshold(parse_detector("binoculars"));
  ASSERT_TRUE(bino.has_value());
  EXPECT_DOUBLE_EQ(bino->threshold, 0.9015310749276843);
  EXPECT_EQ(bino->orientation, kLower);
  EXPECT_FALSE(default_threshold(parse_detector("loglik")).has_value());
}

TEST(ThresholdModelJson, RoundTripIncludingInfinity) {
  ThresholdModel m;
  m.detector = "rank";
  m.threshold = -kInf;
  m.orientation = kLower;
  m.calibration_accuracy = 0.5;
  const ThresholdModel back = threshold_model_from_json(to_json(m));
  EXPECT_EQ(back.threshold, -kInf);
  EXPECT_EQ(back.orientation, kLower);
  EXPECT_EQ(back.detector, "rank");
  EXPECT_EQ(back.calibration_accuracy, 0.5);
}

RecordScore scored(std::string id, Label label, double v) {
  RecordScore r;
  r.record_id = std::move(id);
  r.label = label;
  r.value = v;
  return r;
}

TEST(Evaluate, ConfusionBookkeepingAndDegenerateExclusion) {
  std::vector<RecordScore> scores = {
      scored("h1", Label::kHuman, 0.1), scored("h2", Label::kHuman, 0.6),
      scored("a1", Label::kAi, 0.9), scored("a2", Label::kAi, 0.4)};
  for (int i = 0; i < 2; ++i) {
    RecordScore d;
    d.record_id = "d" + std::to_string(i);
    d.degenerate = true;
    scores.push_back(d);
  }
  ThresholdModel m;
  m.threshold = 0.5;
  const EvalReport r =
      evaluate("ds", parse_detector("loglik"), "b", scores, m);
  EXPECT_EQ(r.n_excluded_degenerate, 2u);
  EXPECT_EQ(r.n_evaluated, 6u);
  ASSERT_TRUE(r.confusion.has_value());
  EXPECT_EQ(r.confusion->total() + r.n_excluded_degenerate, r.n_evaluated);
  EXPECT_EQ(*r.confusion, (Confusion{1, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(*r.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(r.auroc, 0.75);
}

TEST(Evaluate, UnscoredRecordsAreNamed) {
  std::vector<RecordScore> scores = {scored("h", Label::kHuman, 0.0),
                                     scored("a", Label::kAi, 1.0)};
  RecordScore missing;
  missing.record_id = "ghost";
  scores.push_back(missing);
  try {
    evaluate("ds", parse_detector("loglik"), "b", scores, std::nullopt);
    FAIL() << "expected InvalidArgument";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos);
  }
}

TEST(Evaluate, OrientationMismatchIsRejected) {
  ThresholdModel m;
  m.orientation = kLower;
  EXPECT_THROW(evaluate("ds", parse_detector("loglik"), "b",
                        {scored("h", Label::kHuman, 0), scored("a", Label::kAi, 1)},
                        m),
               InvalidArgument);
}

TEST(Evaluate, ShuffledLabelsSitNearChance) {
  std::mt19937_64 rng(31);
  std::vector<RecordScore> scores;
  for (int i = 0; i < 4000; ++i) {
    scores.push_back(scored(std::to_string(i),
                            uniform_below(rng, 2) == 0 ? Label::kHuman
                                                       : Label::kAi,
                            uniform_unit(rng)));
  }
  const ThresholdModel m = calibrate_on(scores, parse_detector("loglik"));
  const EvalReport r = evaluate("ds", parse_detector("loglik"), "b", scores, m);
  EXPECT_NEAR(r.auroc, 0.5, 0.05);
}

TEST(PermutationBaseline, CentredOnHalf) {
  std::mt19937_64 rng(1);
  const auto a = testing::random_scores(rng, 100, false, 3.0);
  const auto h = testing::random_scores(rng, 100, false);
  const PermutationBaseline b =
      permutation_auroc_baseline(a, h, kHigher, 500, 7);
  EXPECT_NEAR(b.mean, 0.5, 0.01);
  EXPECT_GT(b.sd, 0.0);
  EXPECT_LT(b.sd, 0.06);
  const PermutationBaseline again =
      permutation_auroc_baseline(a, h, kHigher, 500, 7);
  EXPECT_EQ(b.mean, again.mean);
  EXPECT_THROW(permutation_auroc_baseline(a, h, kHigher, 1, 7),
               InvalidArgument);
}

TEST(FormatMetric, FixedPrecision) {
  EXPECT_EQ(format_metric(0.5), "0.500000");
  EXPECT_EQ(format_metric(-0.0000001), "0.000000");
  EXPECT_EQ(format_metric(kInf), "inf");
  EXPECT_EQ(format_metric(std::nan("")), "nan");
}

// Two toy "generators" plus their measurement models.
struct ToyMatrixFixture {
  ToyMatrixFixture() {
    ToyLmConfig g1;
    g1.seed = 1;
    ToyLmConfig g2;
    g2.seed = 2;
    ToyLmConfig hum;
    hum.seed = 101;
    b1 = std::make_unique<ToyBackend>("g1", g1);
    b2 = std::make_unique<ToyBackend>("g2", g2);
    for (const auto& [name, cfg] : {std::pair{"g1", g1}, std::pair{"g2", g2}}) {
      ToyCorpusSpec spec;
      spec.generator_name = name;
      spec.human = hum;
      spec.generator = cfg;
      spec.pairs = 40;
      spec.seed = 3;
      const auto records = make_toy_corpus(spec);
      MatrixDataset ds;
      ds.id = name;
      for (std::size_t i = 0; i < records.size(); ++i) {
        (i < records.size() / 2 ? ds.train : ds.test).push_back(records[i]);
      }
      datasets.push_back(ds);
    }
    res.backends = {{"g1", b1.get()}, {"g2", b2.get()}};
  }
  std::unique_ptr<ToyBackend> b1;
  std::unique_ptr<ToyBackend> b2;
  std::vector<MatrixDataset> datasets;
  MatrixResources res;
};

TEST(RunMatrix, CrossLayoutAurocOnlyShape) {
  ToyMatrixFixture f;
  MatrixSpec spec;
  spec.auroc_only = true;
  spec.detectors = {parse_detector("loglik")};
  spec.backends = {"g1", "g2"};
  const MatrixReport r = run_matrix(f.datasets, spec, f.res);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.cols, (std::vector<std::string>{"g1", "g2"}));
  ASSERT_EQ(r.cells.size(), 4u);
  for (const auto& c : r.cells) {
    ASSERT_TRUE(c.report.has_value()) << c.unavailable_reason;
    EXPECT_FALSE(c.report->accuracy.has_value());
  }
  // Each generator's own texts are easiest under its own model.
  EXPECT_GT(r.at(0, 0).report->auroc, 0.9);
  EXPECT_GT(r.at(1, 1).report->auroc, 0.9);
}

TEST(RunMatrix, OwnLayoutMarksMissingBackendsUnavailable) {
  ToyMatrixFixture f;
  MatrixDataset closed = f.datasets[0];
  closed.id = "closed";
  f.datasets.push_back(closed);
  MatrixSpec spec;
  spec.own_model = true;
  spec.own_backend = {{"g1", "g1"}, {"g2", "g2"}};
  spec.binoculars_performer = {{"g1", "g2"}, {"g2", "g1"}};
  spec.detectors = metric_detectors();
  spec.detectors.push_back(parse_detector("blackbox:len"));
  FunctionBlackboxClassifier clf("len", [](std::string_view t) {
    return std::min(1.0, static_cast<double>(t.size()) / 400.0);
  });
  f.res.classifiers = {{"len", &clf}};
  const MatrixReport r = run_matrix(f.datasets, spec, f.res);
  ASSERT_EQ(r.cols.size(), 8u);
  ASSERT_EQ(r.cells.size(), 24u);
  for (std::size_t c = 0; c < 7; ++c) {
    EXPECT_FALSE(r.at(2, c).report.has_value());
    EXPECT_FALSE(r.at(2, c).failed);
    EXPECT_EQ(r.at(2, c).backend, std::string(kUnavailable));
    EXPECT_TRUE(r.at(0, c).report.has_value()) << r.at(0, c).unavailable_reason;
  }
  EXPECT_TRUE(r.at(2, 7).report.has_value());  // black boxes need no model
  const std::string md = to_markdown(r);
  EXPECT_NE(md.find("| closed | \xE2\x80\x94 |"), std::string::npos);
  EXPECT_EQ(r.manifest["unavailable"].size(), 7u);
}

TEST(RunMatrix, OffTheShelfOnlyHasThresholdsForShippedDefaults) {
  ToyMatrixFixture f;
  MatrixSpec spec;
  spec.scenario = Scenario::kOffTheShelf;
  spec.detectors = {parse_detector("loglik"), parse_detector("binoculars")};
  spec.backends = {"g1"};
  spec.binoculars_performer = {{"g1", "g2"}};
  const MatrixReport r = run_matrix(f.datasets, spec, f.res);
  EXPECT_FALSE(r.at(0, 0).report.has_value());
  EXPECT_EQ(r.at(0, 0).unavailable_reason, "no off-the-shelf threshold");
  ASSERT_TRUE(r.at(0, 1).report.has_value());
  EXPECT_EQ(r.at(0, 1).report->threshold->source,
            ThresholdSource::kFixedDefault);
}

TEST(RunMatrix, MissingPerformerOrBackendIsUnavailableNotFatal) {
  ToyMatrixFixture f;
  MatrixSpec spec;
  spec.auroc_only = true;
  spec.detectors = {parse_detector("binoculars")};
  spec.backends = {"g1", "nope"};
  const MatrixReport r = run_matrix(f.datasets, spec, f.res);
  EXPECT_FALSE(r.at(0, 0).report.has_value());
  EXPECT_FALSE(r.at(0, 1).report.has_value());
  EXPECT_THROW(run_matrix(f.datasets, MatrixSpec{}, f.res), InvalidArgument);
}

TEST(RunMatrix, CsvIsRectangularAndStable) {
  ToyMatrixFixture f;
  MatrixSpec spec;
  spec.detectors = {parse_detector("loglik"), parse_detector("entropy")};
  spec.backends = {"g1", "g2"};
  spec.max_parallel = 2;
  const MatrixReport r = run_matrix(f.datasets, spec, f.res);
  const std::string csv = to_csv(r);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "dataset,detector,backend,scenario,accuracy,auroc,tpr@fpr,"
            "realized_fpr,n,n_excluded");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9);
  }
  EXPECT_EQ(rows, r.rows.size() * r.cols.size());
  EXPECT_EQ(r.cols[0], "loglik@g1");
  const MatrixReport again = run_matrix(f.datasets, spec, f.res);
  EXPECT_EQ(to_csv(again), csv);
  EXPECT_EQ(to_markdown(again), to_markdown(r));
  EXPECT_EQ(manifest_json(again), manifest_json(r));
}

}  // namespace
}  // namespace aigt

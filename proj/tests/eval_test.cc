// Copyright 2026 The interj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "interj/eval.h"

#include <gtest/gtest.h>

#include <cmath>

#include "interj/error.h"
#include "interj/random.h"
#include "test_util.h"

namespace interj {
namespace {

TEST(Metrics, AllCorrect) {
  const std::vector<int> y = {0, 1, 2, 3, 4, 4};
  const Metrics m = ComputeMetrics(y, y);
  EXPECT_DOUBLE_EQ(m.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(m.macro_f1, 1.0);
  for (size_t i = 0; i < kNumClasses; ++i)
    for (size_t j = 0; j < kNumClasses; ++j)
      if (i != j) EXPECT_EQ(m.confusion[i][j], 0u);
  EXPECT_EQ(m.confusion[4][4], 2u);
}

TEST(Metrics, HandCountedTwoClassExample) {
  const std::vector<int> truth = {0, 0, 1, 1}, pred = {0, 1, 1, 1};
  const Metrics m = ComputeMetrics(truth, pred);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.75);
  EXPECT_NEAR(m.f1[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(m.f1[1], 0.8, 1e-15);
  EXPECT_NEAR(m.macro_f1, (2.0 / 3.0 + 0.8) / 2.0, 1e-15);
  EXPECT_NEAR(m.macro_f1, 0.7333, 1e-4);
  EXPECT_EQ(m.confusion[0][1], 1u);
}

TEST(Metrics, ConstantPredictorOnBalancedTruth) {
  std::vector<int> truth, pred;
  for (int k = 0; k < 5; ++k)
    for (int i = 0; i < 4; ++i) truth.push_back(k), pred.push_back(2);
  const Metrics m = ComputeMetrics(truth, pred);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.2);
  EXPECT_DOUBLE_EQ(m.f1[0], 0.0);
}

TEST(Metrics, Errors) {
  const std::vector<int> a = {0, 1}, b = {0}, bad = {0, 5};
  try {
    ComputeMetrics(a, b);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kLengthMismatch);
  }
  try {
    ComputeMetrics(a, bad);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownLabel);
  }
}

TEST(Metrics, IdentitiesAndPermutationInvariance) {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t n = 1 + rng.UniformInt(60);
    std::vector<int> truth(n), pred(n);
    for (size_t i = 0; i < n; ++i) {
      truth[i] = static_cast<int>(rng.UniformInt(4));
      pred[i] = rng.Uniform() < 0.6 ? truth[i] : static_cast<int>(rng.UniformInt(4));
    }
    const Metrics m = ComputeMetrics(truth, pred);
    size_t trace = 0;
    for (size_t k = 0; k < kNumClasses; ++k) {
      trace += m.confusion[k][k];
      size_t row = 0;
      for (size_t j = 0; j < kNumClasses; ++j) row += m.confusion[k][j];
      EXPECT_EQ(row, static_cast<size_t>(std::count(truth.begin(), truth.end(), k)));
    }
    EXPECT_DOUBLE_EQ(m.accuracy, static_cast<double>(trace) / n);
    EXPECT_GE(m.macro_f1, 0.0);
    EXPECT_LE(m.macro_f1, 1.0);

    std::vector<size_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = i;
    rng.Shuffle(&perm);
    std::vector<int> t2(n), p2(n);
    for (size_t i = 0; i < n; ++i) t2[i] = truth[perm[i]], p2[i] = pred[perm[i]];
    const Metrics m2 = ComputeMetrics(t2, p2);
    EXPECT_EQ(m2.confusion, m.confusion);
    EXPECT_DOUBLE_EQ(m2.macro_f1, m.macro_f1);
  }
}

Metrics WithAccuracy(double acc) {
  Metrics m;
  m.accuracy = acc;
  m.macro_f1 = acc / 2;
  return m;
}

TEST(Report, ImprovementRecomputesFromRows) {
  Rng rng(2);
  std::vector<std::string> names = {kCleanBaselineName};
  std::vector<Metrics> metrics = {WithAccuracy(0.25 + 0.5 * rng.Uniform())};
  for (int i = 0; i < 7; ++i) {
    names.push_back("plan" + std::to_string(i));
    metrics.push_back(WithAccuracy(rng.Uniform()));
  }
  const ScenarioReport r = MakeReport("t", names, metrics);
  ASSERT_EQ(r.rows.size(), 8u);
  EXPECT_EQ(r.rows[0].improvement_pct, 0.0);
  for (const auto &row : r.rows)
    EXPECT_DOUBLE_EQ(row.improvement_pct,
                     (row.accuracy - r.rows[0].accuracy) / r.rows[0].accuracy * 100.0);
  EXPECT_TRUE(std::isnan(ImprovementPct(0.5, 0.0)));
}

TEST(Report, TextMatchesTableStyle) {
  const ScenarioReport r =
      MakeReport("Speaker 3", {kCleanBaselineName, "BGN"}, {WithAccuracy(0.286), WithAccuracy(0.468)});
  const std::string text = FormatReportText(r);
  EXPECT_NE(text.find("0.468 (63.6%)"), std::string::npos) << text;
  EXPECT_NE(text.find("Original clean data"), std::string::npos);
  EXPECT_EQ(text.find("0.286 ("), std::string::npos);
}

TEST(Report, CsvRoundTripsNumbers) {
  const ScenarioReport r =
      MakeReport("x", {kCleanBaselineName, "Tempo, pitch"}, {WithAccuracy(0.3), WithAccuracy(0.1 / 3)});
  const std::string csv = FormatReportCsv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "training_set,accuracy,macro_f1,improvement_pct");
  const size_t line2 = csv.find('\n', csv.find('\n') + 1) + 1;
  const std::string row = csv.substr(line2, csv.find('\n', line2) - line2);
  EXPECT_EQ(row.substr(0, row.find(',')), "Tempo; pitch");
  const double acc = std::stod(row.substr(row.find(',') + 1));
  EXPECT_EQ(acc, 0.1 / 3);
}

TEST(Report, AveragingRecomputesImprovement) {
  const ScenarioReport a = MakeReport("a", {kCleanBaselineName, "P"}, {WithAccuracy(0.2), WithAccuracy(0.4)});
  const ScenarioReport b = MakeReport("b", {kCleanBaselineName, "P"}, {WithAccuracy(0.4), WithAccuracy(0.4)});
  const ScenarioReport avg = AverageReports("avg", {a, b});
  EXPECT_DOUBLE_EQ(avg.rows[0].accuracy, 0.3);
  EXPECT_DOUBLE_EQ(avg.rows[1].accuracy, 0.4);
  EXPECT_DOUBLE_EQ(avg.rows[1].improvement_pct, (0.4 - 0.3) / 0.3 * 100.0);
}

std::vector<AudioClip> SmallCorpus(size_t per_class, size_t speakers) {
  SynthSpec spec;
  spec.per_class.fill(per_class);
  spec.speakers = speakers;
  spec.seed = 3;
  return SynthCorpus(spec);
}

TEST(Featurize, ParallelEqualsSerial) {
  const auto clips = SmallCorpus(2, 1);
  const LabeledRows a = FeaturizeClips(clips, {}, 1), b = FeaturizeClips(clips, {}, 4);
  EXPECT_EQ(a.features, b.features);
  EXPECT_EQ(a.labels, b.labels);
}

TEST(AugmentAndFeaturize, OriginalsFirstThenVariants) {
  const auto clips = SmallCorpus(1, 1);
  ScenarioConfig config;
  AugmentPlan plan;
  plan.tempo_factors = {0.9, 1.1};
  const LabeledRows rows = AugmentAndFeaturize(clips, plan, config);
  ASSERT_EQ(rows.size(), clips.size() * 3);
  const LabeledRows clean = FeaturizeClips(clips, {}, 1);
  for (size_t i = 0; i < clips.size(); ++i) {
    EXPECT_EQ(rows.features.row(3 * i), clean.features.row(i));
    EXPECT_EQ(rows.labels[3 * i + 2], clean.labels[i]);
  }
  config.include_originals = false;
  EXPECT_EQ(AugmentAndFeaturize(clips, plan, config).size(), clips.size() * 2);
}

ScenarioConfig TinyScenario() {
  ScenarioConfig c;
  c.train.hidden = {16, 8, 8};
  c.train.epochs = 15;
  c.train.batch_size = 8;
  return c;
}

TEST(Scenario1, ReportShapesAndDeterminism) {
  const auto clips = SmallCorpus(3, 5);
  const SplitSpec split{{"spk1", "spk3"}, {"spk2"}, {"spk0", "spk4"}};
  const auto baseline_only = RunScenario1(clips, {}, split, TinyScenario());
  ASSERT_EQ(baseline_only.size(), 2u);
  ASSERT_EQ(baseline_only[0].rows.size(), 1u);
  EXPECT_EQ(baseline_only[0].rows[0].training_set, kCleanBaselineName);

  NamedPlan tempo{"Tempo", {}};
  tempo.plan.tempo_factors = {0.9};
  NamedPlan pitch{"Pitch", {}};
  pitch.plan.pitch_semitones = {1.0};
  ScenarioConfig parallel = TinyScenario();
  parallel.jobs = 3;
  const auto a = RunScenario1(clips, {tempo, pitch}, split, TinyScenario());
  const auto b = RunScenario1(clips, {tempo, pitch}, split, parallel);
  ASSERT_EQ(a.size(), 2u);
  ASSERT_EQ(a[1].rows.size(), 3u);
  EXPECT_EQ(FormatReportCsv(a[0]), FormatReportCsv(b[0]));
  EXPECT_EQ(FormatReportCsv(a[1]), FormatReportCsv(b[1]));
  EXPECT_EQ(a[0].rows[0].accuracy, baseline_only[0].rows[0].accuracy);
}

TEST(Scenario2, StratifiedSplitAndDegenerateRun) {
  const auto clips = SmallCorpus(10, 1);
  const auto scenes = SyntheticScenes(4);
  const std::vector<SceneMix> held_out = {{scenes[6].name, scenes[6].clip, {}},
                                          {scenes[7].name, scenes[7].clip, {}}};
  const Scenario2Data data = BuildScenario2Data(clips, held_out, 0.5, 0.7, 9);
  EXPECT_EQ(data.train.size(), 30u);
  EXPECT_EQ(data.validation.size(), 10u);
  EXPECT_EQ(data.noisy_test.size(), 10u);
  for (const auto &c : data.noisy_test) {
    EXPECT_EQ(c.samples.size(), 24800u);
    EXPECT_EQ(c.provenance.back().rfind("bgn=", 0), 0u);
  }
  // Degenerate case: the "noisy" test set is clean validation data.
  NamedPlan tempo{"Tempo", {}};
  tempo.plan.tempo_factors = {1.1};
  const ScenarioReport r =
      RunScenario2(data.train, data.validation, data.validation, {tempo}, TinyScenario());
  ASSERT_EQ(r.rows.size(), 2u);
  for (const auto &row : r.rows) {
    EXPECT_GE(row.accuracy, 0.0);
    EXPECT_LE(row.accuracy, 1.0);
  }
}

}  // namespace
}  // namespace interj

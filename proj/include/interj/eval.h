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

#ifndef INTERJ_EVAL_H_
#define INTERJ_EVAL_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "interj/augment.h"
#include "interj/dataset.h"
#include "interj/features.h"
#include "interj/model.h"

namespace interj {

struct Metrics {
  size_t total = 0;
  double accuracy = 0.0;
  std::array<double, kNumClasses> precision{};
  std::array<double, kNumClasses> recall{};
  std::array<double, kNumClasses> f1{};
  // Mean F1 over classes that occur in the truth or the predictions.
  double macro_f1 = 0.0;
  // confusion[truth][predicted]
  std::array<std::array<size_t, kNumClasses>, kNumClasses> confusion{};
};

// Throws kLengthMismatch or kUnknownLabel.
Metrics ComputeMetrics(std::span<const int> truth, std::span<const int> predicted);

struct ReportRow {
  std::string training_set;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double improvement_pct = 0.0;  // relative to the first (clean) row
};

struct ScenarioReport {
  std::string title;
  std::vector<ReportRow> rows;
};

inline constexpr const char *kCleanBaselineName = "Original clean data";

double ImprovementPct(double accuracy, double baseline);

// Builds rows from (name, accuracy, macro-F1) triples; the first entry is the
// baseline.
ScenarioReport MakeReport(const std::string &title,
                          const std::vector<std::string> &names,
                          const std::vector<Metrics> &metrics);
// Row-wise mean of accuracy and macro-F1 over reports with identical row
// names; improvements are recomputed from the averaged accuracies.
ScenarioReport AverageReports(const std::string &title,
                              const std::vector<ScenarioReport> &reports);

// Aligned plain-text table, accuracies as "0.468 (63.6%)".
std::string FormatReportText(const ScenarioReport &report);
// Columns training_set,accuracy,macro_f1,improvement_pct.
std::string FormatReportCsv(const ScenarioReport &report);

struct NamedPlan {
  std::string name;
  AugmentPlan plan;
};

struct ScenarioConfig {
  TrainConfig train;
  FeatureConfig features;
  LengthBounds bounds;
  uint64_t seed = 1;
  // Keep the clean originals next to their augmented variants.
  bool include_originals = true;
  int jobs = 1;
};

LabeledRows FeaturizeClips(const std::vector<AudioClip> &clips,
                           const FeatureConfig &config, int jobs);

// Expands every clip under the plan, fits each variant to canonical length
// and featurizes it. Rows are ordered by source clip, original first.
LabeledRows AugmentAndFeaturize(const std::vector<AudioClip> &clips,
                                const AugmentPlan &plan, const ScenarioConfig &config);

// Unseen-speaker generalization: one model on clean training speakers and
// one per plan, each evaluated on every test speaker's clean clips. Returns
// one report per test speaker, in the order listed in the split.
std::vector<ScenarioReport> RunScenario1(const std::vector<AudioClip> &clips,
                                         const std::vector<NamedPlan> &plans,
                                         const SplitSpec &split,
                                         const ScenarioConfig &config);

// Same-speaker robustness: models trained on clean data and on each plan's
// expansion, all evaluated on one fixed noisy test set.
ScenarioReport RunScenario2(const std::vector<AudioClip> &train_clean,
                            const std::vector<AudioClip> &validation_clean,
                            const std::vector<AudioClip> &noisy_test,
                            const std::vector<NamedPlan> &plans,
                            const ScenarioConfig &config);

struct Scenario2Data {
  std::vector<AudioClip> train, validation, noisy_test;
};

// Stratified split of one speaker's clean clips (roughly 60/20/20 per class),
// with the test share mixed with scenes that training never sees.
Scenario2Data BuildScenario2Data(const std::vector<AudioClip> &speaker_clips,
                                 const std::vector<SceneMix> &test_scenes,
                                 double min_w_orig, double max_w_orig, uint64_t seed);

// Mixes every clip of the listed speakers with one of `scenes` (cycled) at an
// original-signal weight drawn uniformly from [min_w_orig, max_w_orig]. Clips
// of other speakers pass through unchanged.
std::vector<AudioClip> NoiseShiftSpeakers(const std::vector<AudioClip> &clips,
                                          const std::vector<std::string> &speakers,
                                          const std::vector<SceneMix> &scenes,
                                          double min_w_orig, double max_w_orig,
                                          uint64_t seed);

}  // namespace interj

#endif  // INTERJ_EVAL_H_

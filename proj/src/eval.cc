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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "interj/error.h"
#include "interj/parallel.h"
#include "interj/random.h"

namespace interj {

Metrics ComputeMetrics(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size())
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(truth.size()) + " truth labels vs " +
                    std::to_string(predicted.size()) + " predictions");
  Metrics m;
  m.total = truth.size();
  for (size_t i = 0; i < truth.size(); ++i) {
    for (int y : {truth[i], predicted[i]})
      if (y < 0 || y >= static_cast<int>(kNumClasses))
        throw Error(ErrorCode::kUnknownLabel, "label index " + std::to_string(y));
    ++m.confusion[static_cast<size_t>(truth[i])][static_cast<size_t>(predicted[i])];
  }
  size_t trace = 0;
  double f1_sum = 0.0;
  size_t present = 0;
  for (size_t c = 0; c < kNumClasses; ++c) {
    trace += m.confusion[c][c];
    size_t truth_count = 0, predicted_count = 0;
    for (size_t k = 0; k < kNumClasses; ++k) {
      truth_count += m.confusion[c][k];
      predicted_count += m.confusion[k][c];
    }
    const double tp = static_cast<double>(m.confusion[c][c]);
    m.precision[c] = predicted_count ? tp / predicted_count : 0.0;
    m.recall[c] = truth_count ? tp / truth_count : 0.0;
    const double pr = m.precision[c] + m.recall[c];
    m.f1[c] = pr > 0.0 ? 2.0 * m.precision[c] * m.recall[c] / pr : 0.0;
    if (truth_count || predicted_count) {
      f1_sum += m.f1[c];
      ++present;
    }
  }
  m.accuracy = m.total ? static_cast<double>(trace) / m.total : 0.0;
  m.macro_f1 = present ? f1_sum / present : 0.0;
  return m;
}

double ImprovementPct(double accuracy, double baseline) {
  if (baseline == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (accuracy - baseline) / baseline * 100.0;
}

ScenarioReport MakeReport(const std::string &title, const std::vector<std::string> &names,
                          const std::vector<Metrics> &metrics) {
  if (names.size() != metrics.size() || names.empty())
    throw Error(ErrorCode::kLengthMismatch, "report needs one name per metrics entry");
  ScenarioReport report;
  report.title = title;
  const double base = metrics.front().accuracy;
  for (size_t i = 0; i < names.size(); ++i)
    report.rows.push_back({names[i], metrics[i].accuracy, metrics[i].macro_f1,
                           ImprovementPct(metrics[i].accuracy, base)});
  return report;
}

ScenarioReport AverageReports(const std::string &title,
                              const std::vector<ScenarioReport> &reports) {
  if (reports.empty()) throw Error(ErrorCode::kLengthMismatch, "no reports to average");
  ScenarioReport out;
  out.title = title;
  const auto &first = reports.front().rows;
  for (size_t r = 0; r < first.size(); ++r) {
    ReportRow row;
    row.training_set = first[r].training_set;
    for (const auto &rep : reports) {
      if (rep.rows.size() != first.size() || rep.rows[r].training_set != row.training_set)
        throw Error(ErrorCode::kLengthMismatch, "reports have different rows");
      row.accuracy += rep.rows[r].accuracy;
      row.macro_f1 += rep.rows[r].macro_f1;
    }
    row.accuracy /= static_cast<double>(reports.size());
    row.macro_f1 /= static_cast<double>(reports.size());
    out.rows.push_back(row);
  }
  for (auto &row : out.rows)
    row.improvement_pct = ImprovementPct(row.accuracy, out.rows.front().accuracy);
  return out;
}

namespace {

std::string WithImprovement(double value, double pct, bool baseline) {
  char buf[64];
  if (baseline || std::isnan(pct))
    std::snprintf(buf, sizeof buf, "%.3f", value);
  else
    std::snprintf(buf, sizeof buf, "%.3f (%.1f%%)", value, pct);
  return buf;
}

}  // namespace

std::string FormatReportText(const ScenarioReport &report) {
  size_t name_width = std::string("Training set").size();
  for (const auto &row : report.rows)
    name_width = std::max(name_width, row.training_set.size());
  std::string out = report.title + "\n";
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-16s  %s\n", static_cast<int>(name_width),
                "Training set", "Accuracy", "Macro-F1");
  out += buf;
  out += std::string(name_width + 2 + 16 + 2 + 8, '-') + "\n";
  for (size_t i = 0; i < report.rows.size(); ++i) {
    const auto &row = report.rows[i];
    std::snprintf(buf, sizeof buf, "%-*s  %-16s  %.3f\n", static_cast<int>(name_width),
                  row.training_set.c_str(),
                  WithImprovement(row.accuracy, row.improvement_pct, i == 0).c_str(),
                  row.macro_f1);
    out += buf;
  }
  return out;
}

std::string FormatReportCsv(const ScenarioReport &report) {
  std::string out = "training_set,accuracy,macro_f1,improvement_pct\n";
  char buf[128];
  for (const auto &row : report.rows) {
    std::string name = row.training_set;
    std::replace(name.begin(), name.end(), ',', ';');
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g\n", row.accuracy, row.macro_f1,
                  row.improvement_pct);
    out += name + buf;
  }
  return out;
}

namespace {

LabeledRows ToRows(const std::vector<std::vector<FeatureVector>> &groups,
                   const std::vector<int> &labels) {
  size_t total = 0;
  for (const auto &g : groups) total += g.size();
  LabeledRows rows;
  rows.features.resize(static_cast<Eigen::Index>(total), kFeatureDim);
  rows.labels.reserve(total);
  Eigen::Index r = 0;
  for (size_t i = 0; i < groups.size(); ++i) {
    for (const auto &fv : groups[i]) {
      for (size_t d = 0; d < kFeatureDim; ++d)
        rows.features(r, static_cast<Eigen::Index>(d)) = fv.values[d];
      rows.labels.push_back(labels[i]);
      ++r;
    }
  }
  return rows;
}

int ClipLabel(const AudioClip &clip) {
  if (!clip.label) throw Error(ErrorCode::kUnknownLabel, "clip has no label");
  return LabelIndex(*clip.label);
}

}  // namespace

LabeledRows FeaturizeClips(const std::vector<AudioClip> &clips, const FeatureConfig &config,
                           int jobs) {
  std::vector<std::vector<FeatureVector>> groups(clips.size());
  std::vector<int> labels(clips.size());
  for (size_t i = 0; i < clips.size(); ++i) labels[i] = ClipLabel(clips[i]);
  ParallelFor(clips.size(), jobs,
              [&](size_t i) { groups[i] = {Featurize(clips[i], config)}; });
  return ToRows(groups, labels);
}

LabeledRows AugmentAndFeaturize(const std::vector<AudioClip> &clips,
                                const AugmentPlan &plan, const ScenarioConfig &config) {
  ValidatePlan(plan);
  std::vector<std::vector<FeatureVector>> groups(clips.size());
  std::vector<int> labels(clips.size());
  for (size_t i = 0; i < clips.size(); ++i) labels[i] = ClipLabel(clips[i]);
  ParallelFor(clips.size(), config.jobs, [&](size_t i) {
    const std::vector<AudioClip> variants =
        ExpandPlan(plan, clips[i], DeriveSeed(config.seed, "augment", i));
    auto &group = groups[i];
    group.reserve(variants.size() + 1);
    if (config.include_originals) group.push_back(Featurize(clips[i], config.features));
    for (size_t v = 0; v < variants.size(); ++v) {
      const AudioClip fitted = FitToCanonical(
          variants[v], DeriveSeed(DeriveSeed(config.seed, "fit", i), "variant", v),
          config.bounds);
      group.push_back(Featurize(fitted, config.features));
    }
  });
  return ToRows(groups, labels);
}

namespace {

std::vector<TrainResult> TrainAll(const std::vector<LabeledRows> &training_sets,
                                  const LabeledRows &validation,
                                  const ScenarioConfig &config) {
  std::vector<TrainResult> results(training_sets.size());
  ParallelFor(training_sets.size(), config.jobs, [&](size_t i) {
    results[i] = Train(training_sets[i], validation, config.train);
  });
  return results;
}

std::vector<LabeledRows> BuildTrainingSets(const std::vector<AudioClip> &train_clips,
                                           const std::vector<NamedPlan> &plans,
                                           const ScenarioConfig &config,
                                           std::vector<std::string> *names) {
  std::vector<LabeledRows> sets;
  names->assign(1, kCleanBaselineName);
  sets.push_back(FeaturizeClips(train_clips, config.features, config.jobs));
  for (const auto &plan : plans) {
    names->push_back(plan.name);
    sets.push_back(AugmentAndFeaturize(train_clips, plan.plan, config));
  }
  return sets;
}

}  // namespace

std::vector<ScenarioReport> RunScenario1(const std::vector<AudioClip> &clips,
                                         const std::vector<NamedPlan> &plans,
                                         const SplitSpec &split,
                                         const ScenarioConfig &config) {
  if (split.train_speakers.empty() || split.validation_speakers.empty() ||
      split.test_speakers.empty())
    throw Error(ErrorCode::kConfigError,
                "scenario 1 needs train, validation and test speakers");
  const Split<AudioClip> parts = SplitBySpeaker(clips, split);
  std::vector<std::string> names;
  const std::vector<LabeledRows> sets = BuildTrainingSets(parts.train, plans, config, &names);
  const LabeledRows validation = FeaturizeClips(parts.validation, config.features, config.jobs);
  const std::vector<TrainResult> models = TrainAll(sets, validation, config);

  std::vector<ScenarioReport> reports;
  for (const auto &speaker : split.test_speakers) {
    std::vector<AudioClip> test;
    for (const auto &clip : parts.test)
      if (clip.speaker == speaker) test.push_back(clip);
    const LabeledRows rows = FeaturizeClips(test, config.features, config.jobs);
    std::vector<Metrics> metrics;
    for (const auto &model : models)
      metrics.push_back(ComputeMetrics(rows.labels, Predict(model.params, rows.features)));
    reports.push_back(
        MakeReport("Scenario 1: test speaker " + speaker, names, metrics));
  }
  return reports;
}

ScenarioReport RunScenario2(const std::vector<AudioClip> &train_clean,
                            const std::vector<AudioClip> &validation_clean,
                            const std::vector<AudioClip> &noisy_test,
                            const std::vector<NamedPlan> &plans,
                            const ScenarioConfig &config) {
  std::vector<std::string> names;
  const std::vector<LabeledRows> sets = BuildTrainingSets(train_clean, plans, config, &names);
  const LabeledRows validation = FeaturizeClips(validation_clean, config.features, config.jobs);
  const std::vector<TrainResult> models = TrainAll(sets, validation, config);
  const LabeledRows test = FeaturizeClips(noisy_test, config.features, config.jobs);
  std::vector<Metrics> metrics;
  for (const auto &model : models)
    metrics.push_back(ComputeMetrics(test.labels, Predict(model.params, test.features)));
  return MakeReport("Scenario 2: noisy test set", names, metrics);
}

Scenario2Data BuildScenario2Data(const std::vector<AudioClip> &speaker_clips,
                                 const std::vector<SceneMix> &test_scenes,
                                 double min_w_orig, double max_w_orig, uint64_t seed) {
  if (test_scenes.empty())
    throw Error(ErrorCode::kEmptyScene, "scenario 2 needs held-out test scenes");
  std::array<std::vector<size_t>, kNumClasses> by_class;
  for (size_t i = 0; i < speaker_clips.size(); ++i)
    by_class[static_cast<size_t>(ClipLabel(speaker_clips[i]))].push_back(i);
  Scenario2Data data;
  Rng rng(DeriveSeed(seed, "scenario2"));
  size_t test_index = 0;
  for (auto &indices : by_class) {
    rng.Shuffle(&indices);
    const size_t n = indices.size();
    const size_t n_test = n / 5, n_val = n / 5;
    for (size_t k = 0; k < n; ++k) {
      const AudioClip &clip = speaker_clips[indices[k]];
      if (k < n_test) {
        const auto &scene = test_scenes[test_index % test_scenes.size()];
        const double w = rng.Uniform(min_w_orig, max_w_orig);
        data.noisy_test.push_back(MixBackground(clip, scene.clip, scene.name, w,
                                                DeriveSeed(seed, "noisy", test_index)));
        ++test_index;
      } else if (k < n_test + n_val) {
        data.validation.push_back(clip);
      } else {
        data.train.push_back(clip);
      }
    }
  }
  return data;
}

std::vector<AudioClip> NoiseShiftSpeakers(const std::vector<AudioClip> &clips,
                                          const std::vector<std::string> &speakers,
                                          const std::vector<SceneMix> &scenes,
                                          double min_w_orig, double max_w_orig,
                                          uint64_t seed) {
  if (scenes.empty()) throw Error(ErrorCode::kEmptyScene, "no scenes to mix test speakers with");
  if (!(min_w_orig <= max_w_orig))
    throw Error(ErrorCode::kConfigError, "noise weight range is empty");
  std::vector<AudioClip> out;
  out.reserve(clips.size());
  size_t mixed = 0;
  for (size_t i = 0; i < clips.size(); ++i) {
    const AudioClip &clip = clips[i];
    const bool shift = clip.speaker &&
        std::find(speakers.begin(), speakers.end(), *clip.speaker) != speakers.end();
    if (!shift) {
      out.push_back(clip);
      continue;
    }
    Rng rng(DeriveSeed(seed, "shift", i));
    const double w = rng.Uniform(min_w_orig, max_w_orig);
    const auto &scene = scenes[mixed++ % scenes.size()];
    out.push_back(MixBackground(clip, scene.clip, scene.name, w, DeriveSeed(seed, "shiftmix", i)));
  }
  return out;
}

}  // namespace interj

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

#ifndef INTERJ_CLI_H_
#define INTERJ_CLI_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "interj/augment.h"
#include "interj/dataset.h"
#include "interj/error.h"
#include "interj/features.h"
#include "interj/model.h"

namespace interj {

// An augmentation plan as written in the config; scene names are resolved
// against the scene library when the plan is used.
struct PlanSpec {
  std::vector<double> tempo;
  std::vector<double> pitch;
  std::vector<std::string> scenes;
  std::vector<double> weights;  // original-signal weights, applied per scene
  bool compose = false;
  std::optional<double> white_noise;
  bool allow_out_of_range = false;
};

struct TestNoiseSpec {
  std::vector<std::string> scenes;
  double min_w_orig = 0.6;
  double max_w_orig = 0.85;
};

struct Scenario1Spec {
  SplitSpec split;
  std::vector<std::string> plans;
  // Mixes the test speakers with these scenes; empty scene list leaves them clean.
  TestNoiseSpec test_noise{{}, 0.6, 0.85};
};

struct Scenario2Spec {
  // Reports are averaged over these speakers.
  std::vector<std::string> speakers;
  std::vector<std::string> plans;
  TestNoiseSpec test_noise;
};

struct PipelineConfig {
  uint64_t seed = 1;
  int jobs = 1;
  std::string corpus_dir;
  std::string scene_dir;  // empty selects the bundled synthetic scenes
  std::string out_dir = "out";
  // "synth" or the path of a manifest to load for scenarios.
  std::string scenario_corpus = "synth";
  bool include_originals = true;
  LengthBounds bounds;
  SynthSpec synth;
  FeatureConfig features;
  TrainConfig train;
  std::map<std::string, PlanSpec> plans;
  Scenario1Spec scenario1;
  Scenario2Spec scenario2;
};

// Throws kConfigError on malformed JSON, unknown keys or wrong types.
PipelineConfig ParsePipelineConfig(const std::string &json_text);
PipelineConfig LoadPipelineConfig(const std::string &path);

// Scenes by name: the synthetic set or the WAVs of scene_dir.
std::vector<SceneMix> SceneLibrary(const PipelineConfig &config);
AugmentPlan ResolvePlan(const PlanSpec &spec, const std::vector<SceneMix> &library);

// 0 success, 1 usage or config error, 2 data error, 3 non-finite loss.
int ExitCodeFor(ErrorCode code);

// Runs the command line; args excludes the program name.
int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace interj

#endif  // INTERJ_CLI_H_

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

#include "interj/cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "interj/audio_io.h"
#include "test_util.h"

namespace interj {
namespace {

namespace fs = std::filesystem;
using testing::Sine;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("interj_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  std::string Path(const std::string &rel) const { return (root_ / rel).string(); }

  void WriteConfig(const std::string &json) { std::ofstream(Path("config.json")) << json; }

  int Run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    std::vector<std::string> full = {"--out", Path("out")};
    if (fs::exists(Path("config.json"))) {
      full.push_back("--config");
      full.push_back(Path("config.json"));
    }
    full.insert(full.end(), args.begin(), args.end());
    return RunCli(full, out_, err_);
  }

  static std::string Slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static size_t Lines(const std::string &path) {
    const std::string s = Slurp(path);
    return static_cast<size_t>(std::count(s.begin(), s.end(), '\n'));
  }

  fs::path root_;
  std::ostringstream out_, err_;
};

constexpr const char *kSmallConfig = R"({
  "seed": 5,
  "synth": {"per_class": 3, "speakers": 5},
  "train": {"epochs": 5, "hidden": [8, 8, 8], "batch_size": 8},
  "plans": {
    "TP": {"tempo": [0.9, 1.1], "pitch": [-2, 2], "compose": true},
    "Nothing": {},
    "BGN": {"scenes": ["rain"], "weights": [0.85]}
  },
  "scenarios": {
    "scenario1": {"train_speakers": ["spk1", "spk3"], "validation_speakers": ["spk2"],
                  "test_speakers": ["spk0", "spk4"], "plans": ["TP"]}
  }
})";

TEST_F(CliTest, PreprocessRejectsShortClip) {
  fs::create_directories(Path("raw/nah"));
  WriteWav(Sine(300, 4800), Path("raw/nah/ann_0001.wav"));  // 0.3 s
  WriteConfig(R"({"paths": {"corpus": ")" + Path("raw") + R"("}})");
  ASSERT_EQ(Run({"preprocess"}), 0) << err_.str();
  EXPECT_NE(out_.str().find("accepted 0, rejected 1 (too short 1"), std::string::npos) << out_.str();
  EXPECT_EQ(Lines(Path("out/preprocessed/manifest.jsonl")), 0u);
}

TEST_F(CliTest, PreprocessEmptyCorpusAndDeterminism) {
  fs::create_directories(Path("raw"));
  WriteConfig(R"({"paths": {"corpus": ")" + Path("raw") + R"("}})");
  ASSERT_EQ(Run({"preprocess"}), 0) << err_.str();
  EXPECT_EQ(Lines(Path("out/preprocessed/manifest.jsonl")), 0u);

  fs::create_directories(Path("raw/oy"));
  fs::create_directories(Path("raw/mmm"));
  WriteWav(Sine(300, 9000), Path("raw/oy/bob_1.wav"));
  WriteWav(Sine(200, 12000), Path("raw/mmm/bob_2.wav"));
  ASSERT_EQ(Run({"preprocess"}), 0);
  const std::string first = Slurp(Path("out/preprocessed/manifest.jsonl"));
  const std::string wav = Slurp(Path("out/preprocessed/oy/bob_1.wav"));
  ASSERT_EQ(Run({"preprocess"}), 0);
  EXPECT_EQ(Slurp(Path("out/preprocessed/manifest.jsonl")), first);
  EXPECT_EQ(Slurp(Path("out/preprocessed/oy/bob_1.wav")), wav);
  EXPECT_EQ(Lines(Path("out/preprocessed/manifest.jsonl")), 2u);
}

TEST_F(CliTest, AugmentCountsAndWarnings) {
  WriteConfig(kSmallConfig);
  ASSERT_EQ(Run({"synth"}), 0) << err_.str();
  const std::string manifest = Path("out/synth/manifest.jsonl");
  ASSERT_EQ(Run({"augment", "TP", "--manifest", manifest}), 0) << err_.str();
  // 15 originals per class across five speakers, eight variants each.
  EXPECT_NE(out_.str().find("nah               15        120      135"), std::string::npos)
      << out_.str();
  EXPECT_EQ(Lines(Path("out/augmented/tp/manifest.jsonl")), 75u + 600u);

  ASSERT_EQ(Run({"augment", "Nothing", "--manifest", manifest}), 0);
  EXPECT_NE(err_.str().find("warning"), std::string::npos);
  EXPECT_NE(out_.str().find("all               75          0       75"), std::string::npos)
      << out_.str();
}

TEST_F(CliTest, MissingSceneDirectoryIsNamed) {
  std::string config = kSmallConfig;
  config.replace(config.find("\"seed\""), 0, "\"paths\": {\"scenes\": \"" + Path("no_scenes") + "\"},\n");
  WriteConfig(config);
  ASSERT_EQ(Run({"synth"}), 0);
  EXPECT_EQ(Run({"augment", "BGN", "--manifest", Path("out/synth/manifest.jsonl")}), 2);
  EXPECT_NE(err_.str().find(Path("no_scenes")), std::string::npos) << err_.str();
}

TEST_F(CliTest, FeaturizeTrainEvaluate) {
  WriteConfig(kSmallConfig);
  ASSERT_EQ(Run({"synth"}), 0);
  const std::string manifest = Path("out/synth/manifest.jsonl");
  ASSERT_EQ(Run({"featurize", "--manifest", manifest}), 0) << err_.str();
  const std::string csv = Slurp(Path("out/features.csv"));
  const std::string header = csv.substr(0, csv.find('\n'));
  EXPECT_EQ(std::count(header.begin(), header.end(), ',') + 1, 196);
  EXPECT_EQ(Lines(Path("out/features.csv")), 1u + Lines(manifest));
  ASSERT_EQ(Run({"featurize", "--manifest", manifest, "--output", Path("again.csv")}), 0);
  EXPECT_EQ(Slurp(Path("again.csv")), csv);

  ASSERT_EQ(Run({"train", "--features", Path("out/features.csv")}), 0) << err_.str();
  ASSERT_EQ(Run({"train", "--features", Path("again.csv"), "--output", Path("m2.json")}), 0);
  EXPECT_EQ(Slurp(Path("out/model.json")), Slurp(Path("m2.json")));

  ASSERT_EQ(Run({"evaluate", "--features", Path("out/features.csv")}), 0) << err_.str();
  EXPECT_NE(out_.str().find("accuracy"), std::string::npos);
  EXPECT_TRUE(fs::exists(Path("out/evaluation.json")));
}

TEST_F(CliTest, EvaluateRejectsForeignCheckpoint) {
  WriteConfig(kSmallConfig);
  ASSERT_EQ(Run({"synth"}), 0);
  ASSERT_EQ(Run({"featurize", "--manifest", Path("out/synth/manifest.jsonl")}), 0);
  SaveCheckpoint(ZeroModel({40, 4, 5}), Path("small.json"));
  EXPECT_EQ(Run({"evaluate", "--model", Path("small.json"), "--features", Path("out/features.csv")}), 2);
  EXPECT_NE(err_.str().find("ShapeMismatch"), std::string::npos) << err_.str();
  EXPECT_NE(err_.str().find("193"), std::string::npos);
}

TEST_F(CliTest, ExplodingTrainingExitsWithNumericCode) {
  std::string config = kSmallConfig;
  config.replace(config.find("\"epochs\": 5"), 11, "\"epochs\": 30, \"learning_rate\": 1e300");
  WriteConfig(config);
  ASSERT_EQ(Run({"synth"}), 0);
  ASSERT_EQ(Run({"featurize", "--manifest", Path("out/synth/manifest.jsonl")}), 0);
  EXPECT_EQ(Run({"train", "--features", Path("out/features.csv")}), 3) << out_.str();
  EXPECT_NE(err_.str().find("NonFiniteLoss"), std::string::npos);
}

TEST_F(CliTest, UsageAndConfigErrors) {
  EXPECT_EQ(Run({"frobnicate"}), 1);
  EXPECT_EQ(Run({"scenario", "3"}), 1);
  EXPECT_EQ(Run({"--help"}), 0);
  WriteConfig(R"({"sed": 1})");
  EXPECT_EQ(Run({"synth"}), 1);
  EXPECT_NE(err_.str().find("sed"), std::string::npos);
  WriteConfig(R"({"scenarios": {"scenario1": {"plans": ["Missing"]}}})");
  EXPECT_EQ(Run({"synth"}), 1);
  WriteConfig(R"({"plans": {"Wild": {"tempo": [2.0]}}})");
  EXPECT_EQ(Run({"augment", "Wild"}), 1);
  WriteConfig("{ not json");
  EXPECT_EQ(Run({"synth"}), 1);
}

TEST_F(CliTest, ScenarioOneWritesSpeakerReports) {
  WriteConfig(kSmallConfig);
  ASSERT_EQ(Run({"--jobs", "2", "scenario", "1"}), 0) << err_.str();
  for (const char *name : {"scenario1_spk0.csv", "scenario1_spk4.csv", "scenario1_mean.csv",
                           "scenario1_spk0.txt"})
    EXPECT_TRUE(fs::exists(Path(std::string("out/") + name))) << name;
  EXPECT_EQ(Lines(Path("out/scenario1_spk0.csv")), 3u);
}

}  // namespace
}  // namespace interj

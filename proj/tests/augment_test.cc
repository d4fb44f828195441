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

#include "interj/augment.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "interj/dsp.h"
#include "interj/error.h"
#include "interj/random.h"
#include "test_util.h"

namespace interj {
namespace {

using testing::DurationRatio;
using testing::Silence;
using testing::Sine;

AudioClip Labeled(AudioClip clip) {
  clip.label = "oy";
  clip.speaker = "spk3";
  return clip;
}

TEST(ChangeTempo, UnitFactorKeepsDuration) {
  const AudioClip x = Sine(440, 24800);
  const AudioClip y = ChangeTempo(x, 1.0);
  EXPECT_LE(std::abs(static_cast<long>(y.samples.size()) - 24800L), 1L);
  ASSERT_EQ(y.provenance.size(), 1u);
  EXPECT_EQ(y.provenance[0], "tempo=1");
}

TEST(ChangeTempo, FastestFactorOnCanonicalClip) {
  const AudioClip y = ChangeTempo(Sine(440, 24800), 1.14);
  EXPECT_NEAR(y.duration_seconds(), 1.55 / 1.14, 0.01 * 1.55 / 1.14);
}

TEST(ChangeTempo, KeepsPitchWhenSlowing) {
  const AudioClip x = Sine(440, 24800);
  const AudioClip y = ChangeTempo(x, 0.86);
  EXPECT_NEAR(DurationRatio(y, x), 1.0 / 0.86, 0.01 / 0.86);
  EXPECT_NEAR(DominantFrequency(y), 440.0, 4.4);
}

TEST(ChangeTempo, RejectsBadInput) {
  EXPECT_THROW(ChangeTempo(Sine(440, 5000), 0.0), Error);
  try {
    ChangeTempo(Sine(440, 479), 1.0);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kSignalTooShort);
  }
}

TEST(ShiftPitch, ZeroSemitonesIsNearIdentity) {
  const AudioClip x = Sine(440, 24800);
  const AudioClip y = ShiftPitch(x, 0.0);
  EXPECT_NEAR(DurationRatio(y, x), 1.0, 0.005);
  EXPECT_NEAR(DominantFrequency(y), 440.0, 2.2);
}

TEST(ShiftPitch, OctaveUp) {
  const AudioClip x = Sine(440, 24800);
  const AudioClip y = ShiftPitch(x, 12.0);
  EXPECT_NEAR(DominantFrequency(y), 880.0, 17.6);
  EXPECT_NEAR(DurationRatio(y, x), 1.0, 0.01);
}

TEST(ShiftPitch, LowestRangeEndpoint) {
  const AudioClip x = Sine(440, 24800);
  const AudioClip y = ShiftPitch(x, -2.4);
  const double expected = 440.0 * std::pow(2.0, -0.2);
  EXPECT_NEAR(DominantFrequency(y), expected, 0.02 * expected);
  EXPECT_EQ(y.provenance.back(), "pitch=-2.4");
}

TEST(TempoPitch, CompositionMultipliesEffects) {
  const AudioClip x = Sine(440, 24800);
  const AudioClip y = ShiftPitch(ChangeTempo(x, 1.1), 2.0);
  EXPECT_NEAR(DurationRatio(y, x), 1.0 / 1.1, 0.02 / 1.1);
  const double f = 440.0 * std::pow(2.0, 2.0 / 12.0);
  EXPECT_NEAR(DominantFrequency(y), f, 0.02 * f);
}

TEST(MixBackground, UnitWeightIsIdentity) {
  Rng rng(5);
  AudioClip x = Silence(2000), scene = Silence(5000);
  for (double &v : x.samples) v = rng.Uniform(-1, 1);
  for (double &v : scene.samples) v = rng.Uniform(-1, 1);
  const AudioClip y = MixBackground(x, scene, "rain", 1.0, 9);
  EXPECT_EQ(y.samples, x.samples);
}

TEST(MixBackground, ConstantSignalsFollowWeightedSum) {
  AudioClip x = Silence(1000), scene = Silence(1000);
  for (double &v : x.samples) v = 0.5;
  for (double &v : scene.samples) v = -0.5;
  const AudioClip y = MixBackground(x, scene, "mall", 0.83, 1);
  for (double v : y.samples) EXPECT_NEAR(v, 0.33, 1e-15);
}

TEST(MixBackground, ZeroWeightReturnsSceneSegment) {
  AudioClip x = Silence(100), scene = Silence(300);
  for (size_t i = 0; i < scene.samples.size(); ++i) scene.samples[i] = i / 1000.0;
  const AudioClip y = MixBackground(x, scene, "tv", 0.0, 77);
  const size_t offset = static_cast<size_t>(std::llround(y.samples[0] * 1000.0));
  EXPECT_LE(offset, 200u);
  for (size_t i = 0; i < y.samples.size(); ++i)
    EXPECT_EQ(y.samples[i], scene.samples[offset + i]);
  EXPECT_NE(y.provenance.back().find(":o" + std::to_string(offset)), std::string::npos);
}

TEST(MixBackground, ShortSceneIsLooped) {
  AudioClip x = Silence(10), scene = Silence(3);
  scene.samples = {0.1, 0.2, 0.3};
  const AudioClip y = MixBackground(x, scene, "rain", 0.0, 4);
  for (size_t i = 1; i < y.samples.size(); ++i) {
    const double prev = y.samples[i - 1], cur = y.samples[i];
    EXPECT_TRUE(std::abs(cur - prev - 0.1) < 1e-12 || std::abs(cur - 0.1) < 1e-12);
  }
}

TEST(MixBackground, PreservesLabelAndRejectsEmptyScene) {
  const AudioClip x = Labeled(Sine(300, 1000));
  const AudioClip y = MixBackground(x, Sine(100, 2000), "bus", 0.9, 3);
  EXPECT_EQ(y.label, x.label);
  EXPECT_EQ(y.speaker, x.speaker);
  try {
    MixBackground(x, Silence(0), "void", 0.9, 3);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyScene);
  }
}

TEST(WhiteNoise, ZeroAmplitudeIsIdentity) {
  const AudioClip x = Sine(440, 1000);
  EXPECT_EQ(AddWhiteNoise(x, 0.0, 1).samples, x.samples);
}

TEST(WhiteNoise, DeterministicPerSeed) {
  const AudioClip x = Sine(440, 1000);
  EXPECT_EQ(AddWhiteNoise(x, 0.05, 12).samples, AddWhiteNoise(x, 0.05, 12).samples);
  EXPECT_NE(AddWhiteNoise(x, 0.05, 12).samples, AddWhiteNoise(x, 0.05, 13).samples);
}

TEST(WhiteNoise, VarianceMatchesUniformFormula) {
  const AudioClip y = AddWhiteNoise(Silence(24800), 0.1, 2024);
  double mean = 0.0;
  for (double v : y.samples) mean += v;
  mean /= y.samples.size();
  double var = 0.0;
  for (double v : y.samples) var += (v - mean) * (v - mean);
  var /= y.samples.size();
  EXPECT_NEAR(var, 0.01 / 3.0, 0.1 * 0.01 / 3.0);
}

TEST(WhiteNoise, AmplitudeDomain) {
  EXPECT_THROW(AddWhiteNoise(Silence(10), 1.0, 1), Error);
  EXPECT_THROW(AddWhiteNoise(Silence(10), -0.1, 1), Error);
}

SceneMix FlatScene(const std::string &name, std::vector<double> weights) {
  SceneMix s;
  s.name = name;
  s.clip = Sine(150, 30000, 0.3);
  s.weights = std::move(weights);
  return s;
}

// Brute-force count: enumerate every element of the plan's product set.
size_t EnumerateVariants(const AugmentPlan &plan) {
  std::vector<std::pair<int, int>> tp;  // (tempo index or -1, pitch index or -1)
  for (int t = -1; t < static_cast<int>(plan.tempo_factors.size()); ++t)
    for (int p = -1; p < static_cast<int>(plan.pitch_semitones.size()); ++p) {
      if (t == -1 && p == -1) continue;
      if (!plan.compose && t != -1 && p != -1) continue;
      tp.emplace_back(t, p);
    }
  size_t pairs = 0;
  for (const auto &s : plan.scenes) pairs += s.weights.size();
  size_t count = 0;
  for (int base = -1; base < static_cast<int>(tp.size()); ++base)
    for (size_t b = 0; b <= pairs; ++b) {
      const bool original = base == -1, clean = b == pairs;
      if (original && clean) continue;         // the untouched original
      if (!original && !clean && !plan.compose) continue;
      ++count;
    }
  return count + (plan.white_noise ? 1 : 0);
}

TEST(ExpandPlan, EightVariantsFromTwoTemposAndTwoPitches) {
  AugmentPlan plan;
  plan.tempo_factors = {0.9, 1.1};
  plan.pitch_semitones = {2, -2};
  plan.compose = true;
  EXPECT_EQ(ExpectedVariantCount(plan), 8u);
  const auto out = ExpandPlan(plan, Labeled(Sine(300, 24800)), 1);
  ASSERT_EQ(out.size(), 8u);
  std::set<std::string> descriptors;
  for (const auto &c : out) {
    descriptors.insert(c.provenance_string());
    EXPECT_EQ(c.label, "oy");
    EXPECT_EQ(c.speaker, "spk3");
  }
  EXPECT_EQ(descriptors.size(), 8u);
  EXPECT_TRUE(descriptors.count("tempo=0.9+pitch=+2"));
}

TEST(ExpandPlan, EmptyPlanYieldsNothing) {
  EXPECT_TRUE(ExpandPlan(AugmentPlan{}, Sine(300, 24800), 1).empty());
}

TEST(ExpandPlan, ComposedBackgroundCount) {
  AugmentPlan plan;
  plan.tempo_factors = {1.1};
  plan.pitch_semitones = {-1};
  plan.scenes = {FlatScene("rain", {0.83, 0.9})};
  plan.compose = true;
  EXPECT_EQ(EnumerateVariants(plan), 11u);
  EXPECT_EQ(ExpectedVariantCount(plan), 11u);
  EXPECT_EQ(ExpandPlan(plan, Sine(300, 24800), 3).size(), 11u);
}

TEST(ExpandPlan, CountLawMatchesEnumeration) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    AugmentPlan plan;
    for (uint64_t i = 0, n = rng.UniformInt(3); i < n; ++i)
      plan.tempo_factors.push_back(rng.Uniform(0.86, 1.14));
    for (uint64_t i = 0, n = rng.UniformInt(3); i < n; ++i)
      plan.pitch_semitones.push_back(rng.Uniform(-2.4, 2.4));
    for (uint64_t i = 0, n = rng.UniformInt(2); i < n; ++i) {
      std::vector<double> w;
      for (uint64_t k = 0, m = 1 + rng.UniformInt(2); k < m; ++k)
        w.push_back(rng.Uniform(0.83, 0.93));
      plan.scenes.push_back(FlatScene("s" + std::to_string(i), w));
    }
    plan.compose = rng.UniformInt(1) == 1;
    if (rng.UniformInt(3) == 0) plan.white_noise = 0.01;
    ASSERT_EQ(ExpectedVariantCount(plan), EnumerateVariants(plan)) << trial;
  }
}

TEST(ExpandPlan, ExpansionSizeMatchesFormulaOnSmallPlans) {
  Rng rng(5);
  const AudioClip x = Sine(220, 24800);
  for (int trial = 0; trial < 6; ++trial) {
    AugmentPlan plan;
    for (uint64_t i = 0, n = rng.UniformInt(1); i < n; ++i) plan.tempo_factors.push_back(1.05);
    for (uint64_t i = 0, n = rng.UniformInt(1); i < n; ++i) plan.pitch_semitones.push_back(1.0);
    if (rng.UniformInt(1)) plan.scenes.push_back(FlatScene("a", {0.85, 0.9}));
    plan.compose = rng.UniformInt(1) == 1;
    EXPECT_EQ(ExpandPlan(plan, x, 8).size(), ExpectedVariantCount(plan));
  }
}

TEST(ExpandPlan, DeterministicGivenSeed) {
  AugmentPlan plan;
  plan.tempo_factors = {0.95};
  plan.scenes = {FlatScene("rain", {0.85})};
  plan.white_noise = 0.02;
  plan.compose = true;
  const AudioClip x = Sine(250, 24800);
  const auto a = ExpandPlan(plan, x, 42), b = ExpandPlan(plan, x, 42);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].samples, b[i].samples);
    EXPECT_EQ(a[i].provenance, b[i].provenance);
  }
}

TEST(ValidatePlan, RangesAreEnforcedUnlessOverridden) {
  AugmentPlan plan;
  plan.tempo_factors = {1.5};
  EXPECT_THROW(ValidatePlan(plan), Error);
  plan.allow_out_of_range = true;
  EXPECT_NO_THROW(ValidatePlan(plan));
  plan.tempo_factors = {-1.0};
  EXPECT_THROW(ValidatePlan(plan), Error);

  AugmentPlan pitch;
  pitch.pitch_semitones = {3.0};
  EXPECT_THROW(ValidatePlan(pitch), Error);
  AugmentPlan bgn;
  bgn.scenes = {FlatScene("x", {0.5})};
  try {
    ValidatePlan(bgn);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kPlanInvalid);
  }
}

TEST(Scenes, NineSyntheticScenes) {
  const auto scenes = SyntheticScenes(1);
  ASSERT_EQ(scenes.size(), 9u);
  for (const auto &s : scenes) {
    EXPECT_GE(s.clip.samples.size(), 24800u);
    double peak = 0.0;
    for (double v : s.clip.samples) peak = std::max(peak, std::abs(v));
    EXPECT_NEAR(peak, 0.8, 1e-12) << s.name;
  }
  EXPECT_EQ(scenes[6].name, "rain");
  EXPECT_EQ(SyntheticScenes(1)[3].clip.samples, scenes[3].clip.samples);
}

TEST(Scenes, MissingDirectoryNamesPath) {
  try {
    LoadScenes("/nonexistent/scenes", 24800);
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/scenes"), std::string::npos);
  }
}

TEST(ProvenanceSlug, IsFileNameSafe) {
  AudioClip c;
  c.provenance = {"tempo=0.9", "bgn=rain:w0.83:o12"};
  EXPECT_EQ(ProvenanceSlug(c), "tempo=0.9+bgn=rain_w0.83_o12");
}

}  // namespace
}  // namespace interj

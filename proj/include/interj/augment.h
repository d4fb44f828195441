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

#ifndef INTERJ_AUGMENT_H_
#define INTERJ_AUGMENT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "interj/audio_io.h"

namespace interj {

// Ranges that keep an augmented clip recognizable as its label.
struct AugmentRanges {
  double min_tempo = 0.86;
  double max_tempo = 1.14;
  double min_semitones = -2.4;
  double max_semitones = 2.4;
  double min_w_orig = 0.83;
  double max_w_orig = 0.93;
};

struct WsolaConfig {
  double segment_ms = 30.0;
  double tolerance_ms = 7.5;
};

// Time-scale modification by waveform-similarity overlap-add. factor > 1
// speeds the clip up; output length is round(len / factor) and pitch is kept.
AudioClip ChangeTempo(const AudioClip &clip, double factor,
                      const WsolaConfig &config = {});

// Shifts pitch by `semitones` (100 cents each) without changing duration:
// resample by 2^(-semitones/12), then restore the length with ChangeTempo.
AudioClip ShiftPitch(const AudioClip &clip, double semitones,
                     const WsolaConfig &config = {});

// Unclamped weighted sum w_orig * clip[i] + (1 - w_orig) * scene[i].
// Both spans must have equal length.
std::vector<double> WeightedMix(std::span<const double> clip,
                                std::span<const double> scene, double w_orig);

// Scene samples aligned to a clip of `length` samples starting at `offset`,
// looping the scene when it is shorter than the clip.
std::vector<double> SceneSegment(std::span<const double> scene, size_t length,
                                 size_t offset);

// Mixes a background scene into the clip. The scene offset is drawn from
// `seed`; the result is clamped to [-1, 1].
AudioClip MixBackground(const AudioClip &clip, const AudioClip &scene,
                        const std::string &scene_name, double w_orig,
                        uint64_t seed);

// Adds amplitude * u[i], u[i] uniform in [-1, 1], then clamps.
AudioClip AddWhiteNoise(const AudioClip &clip, double amplitude, uint64_t seed);

struct SceneMix {
  std::string name;
  AudioClip clip;
  std::vector<double> weights;  // w_orig values, one output per weight
};

struct AugmentPlan {
  std::vector<double> tempo_factors;
  std::vector<double> pitch_semitones;
  std::vector<SceneMix> scenes;
  std::optional<double> white_noise;
  // Emit tempo x pitch cross-products, and apply every scene/weight pair to
  // each tempo/pitch variant as well as to the original.
  bool compose = false;
  // Skip range validation.
  bool allow_out_of_range = false;
  AugmentRanges ranges;

  size_t background_pairs() const;
};

// Throws kPlanInvalid when a parameter is outside its hard domain, or outside
// `ranges` unless allow_out_of_range is set.
void ValidatePlan(const AugmentPlan &plan);

// Number of clips ExpandPlan emits per original.
size_t ExpectedVariantCount(const AugmentPlan &plan);

// All augmented variants of one clip, in a fixed order: tempo-only,
// pitch-only, tempo x pitch, background on the original, background on each
// tempo/pitch variant, white noise. The original itself is not included.
std::vector<AudioClip> ExpandPlan(const AugmentPlan &plan, const AudioClip &clip,
                                  uint64_t seed);

// Provenance rendered into a file-name-safe slug.
std::string ProvenanceSlug(const AudioClip &clip);

// The nine background scene kinds, in a fixed order.
const std::vector<std::string> &SceneNames();

// Procedural stand-ins for the nine scenes: shaped noise with a
// scene-specific spectral envelope and modulation, peak-normalized.
std::vector<SceneMix> SyntheticScenes(uint64_t seed, double seconds = 3.0,
                                      int sample_rate = kCanonicalSampleRate);

// Loads <dir>/<name>.wav for every scene name present in the directory,
// resampled to the canonical rate. Scenes shorter than min_samples are looped.
std::vector<SceneMix> LoadScenes(const std::string &dir, size_t min_samples);

}  // namespace interj

#endif  // INTERJ_AUGMENT_H_

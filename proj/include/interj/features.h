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

#ifndef INTERJ_FEATURES_H_
#define INTERJ_FEATURES_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "interj/audio_io.h"
#include "interj/dsp.h"

namespace interj {

// Block layout of the per-clip feature row. The sizes are an inferred
// decomposition of the 193-column total into the five feature families.
constexpr size_t kNumMfcc = 40;
constexpr size_t kNumMel = 128;
constexpr size_t kNumChroma = 12;
constexpr size_t kNumContrast = 7;
constexpr size_t kNumTonnetz = 6;
constexpr size_t kMfccOffset = 0;
constexpr size_t kMelOffset = kMfccOffset + kNumMfcc;
constexpr size_t kChromaOffset = kMelOffset + kNumMel;
constexpr size_t kContrastOffset = kChromaOffset + kNumChroma;
constexpr size_t kTonnetzOffset = kContrastOffset + kNumContrast;
constexpr size_t kFeatureDim = kTonnetzOffset + kNumTonnetz;
static_assert(kFeatureDim == 193);

constexpr double kLogFloor = 1e-10;

struct FeatureConfig {
  StftConfig stft;
  // Fraction of each band's sorted magnitudes averaged into peak / valley.
  double contrast_quantile = 0.02;
  // Upper edges of the octave sub-bands; the last band runs to Nyquist.
  std::vector<double> contrast_edges = {200.0, 400.0, 800.0, 1600.0, 3200.0};
  // Clips must have exactly this many seconds of audio. 0 disables the check.
  double canonical_seconds = 1.55;
};

struct FeatureVector {
  std::array<double, kFeatureDim> values{};

  std::span<const double> mfcc() const { return block(kMfccOffset, kNumMfcc); }
  std::span<const double> mel() const { return block(kMelOffset, kNumMel); }
  std::span<const double> chroma() const { return block(kChromaOffset, kNumChroma); }
  std::span<const double> contrast() const {
    return block(kContrastOffset, kNumContrast);
  }
  std::span<const double> tonnetz() const {
    return block(kTonnetzOffset, kNumTonnetz);
  }

 private:
  std::span<const double> block(size_t offset, size_t n) const {
    return {values.data() + offset, n};
  }
};

// Triangular filters on the Slaney mel scale, area-normalized, stored sparsely.
class MelFilterbank {
 public:
  MelFilterbank(size_t num_mels, size_t fft_size, int sample_rate,
                double fmin = 0.0, double fmax = -1.0);

  size_t num_mels() const { return first_bin_.size(); }
  double center_hz(size_t m) const { return centers_[m]; }
  double weight(size_t m, size_t bin) const;
  // Applies the filters to a power spectrum of fft_size / 2 + 1 bins.
  void Apply(std::span<const double> power, std::span<double> out) const;

  static double HzToMel(double hz);
  static double MelToHz(double mel);

 private:
  std::vector<size_t> first_bin_;
  std::vector<std::vector<double>> weights_;
  std::vector<double> centers_;
};

// Per-frame kernels, exposed for direct evaluation.
std::array<double, kNumChroma> ChromaFrame(std::span<const double> magnitude,
                                           double bin_hz);
std::array<double, kNumContrast> ContrastFrame(
    std::span<const double> magnitude, double bin_hz, double nyquist_hz,
    const FeatureConfig &config = {});
std::array<double, kNumTonnetz> TonnetzFrame(std::span<const double> chroma);
// Orthonormal DCT-II, first `count` coefficients.
std::vector<double> DctII(std::span<const double> x, size_t count);
// Pitch class of a frequency with C = 0 and A = 9.
int PitchClass(double hz);

// Frame-mean features of a clip of any length >= one frame.
std::vector<double> MfccMeans(const AudioClip &clip, const FeatureConfig &config = {});
std::vector<double> MelMeans(const AudioClip &clip, const FeatureConfig &config = {});
std::vector<double> ChromaMeans(const AudioClip &clip, const FeatureConfig &config = {});
std::vector<double> SpectralContrastMeans(const AudioClip &clip,
                                          const FeatureConfig &config = {});
std::vector<double> TonnetzMeans(const AudioClip &clip,
                                 const FeatureConfig &config = {});

// Concatenated feature row of a canonical-length clip. Throws kLengthMismatch
// when the clip is not canonical length.
FeatureVector Featurize(const AudioClip &clip, const FeatureConfig &config = {});

struct FeatureRow {
  std::string label;
  std::string speaker;
  std::string provenance;
  FeatureVector features;
};

// CSV with header label,speaker,provenance,f000..f192; values printed with
// 17 significant digits.
void WriteFeatureCsv(const std::vector<FeatureRow> &rows, const std::string &path);
std::vector<FeatureRow> ReadFeatureCsv(const std::string &path);

}  // namespace interj

#endif  // INTERJ_FEATURES_H_

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

#include "interj/dsp.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "interj/error.h"
#include "interj/random.h"
#include "test_util.h"

namespace interj {
namespace {

using testing::NaiveDft;
using testing::Silence;
using testing::Sine;

TEST(Fft, MatchesDirectDft) {
  Rng rng(7);
  for (size_t n : {1u, 2u, 8u, 64u, 512u}) {
    std::vector<Complex> x(n);
    for (auto &v : x) v = Complex(rng.Uniform(-1, 1), rng.Uniform(-1, 1));
    const auto expected = NaiveDft(x);
    std::vector<Complex> y = x;
    Fft(y);
    for (size_t k = 0; k < n; ++k) EXPECT_LT(std::abs(y[k] - expected[k]), 1e-9) << n << " " << k;
    Fft(y, true);
    for (size_t k = 0; k < n; ++k) EXPECT_LT(std::abs(y[k] - x[k]), 1e-12);
  }
}

TEST(Stft, CanonicalClipHas156Frames) {
  const FrameMatrix m = Stft(Silence(24800));
  EXPECT_EQ(m.num_frames, 156u);
  EXPECT_EQ(m.frame_length, 400u);
  EXPECT_EQ(m.hop, 160u);
  EXPECT_EQ(m.fft_size, 512u);
  EXPECT_EQ(m.num_bins, 257u);
}

TEST(Stft, FrameCountFormulas) {
  EXPECT_EQ(FrameCount(24800, 400, 160, FramingMode::kCentered), 156u);
  EXPECT_EQ(FrameCount(24800, 400, 160, FramingMode::kValid), 153u);
  EXPECT_EQ(FrameCount(399, 400, 160, FramingMode::kValid), 0u);
  const FrameMatrix m = Stft(Sine(300, 1000), {25, 10, FramingMode::kValid});
  EXPECT_EQ(m.num_frames, 1u + (1000u - 400u) / 160u);
}

TEST(Stft, SilenceGivesZeroSpectra) {
  const FrameMatrix m = Stft(Silence(5000));
  for (const auto &b : m.bins) EXPECT_EQ(std::abs(b), 0.0);
}

TEST(Stft, SinePeaksAtNearestBin) {
  const FrameMatrix m = Stft(Sine(1000, 16000));
  // Brute-force nearest bin to 1000 Hz.
  size_t nearest = 0;
  for (size_t k = 0; k < m.num_bins; ++k)
    if (std::abs(k * m.bin_hz() - 1000.0) < std::abs(nearest * m.bin_hz() - 1000.0))
      nearest = k;
  for (size_t t = 2; t + 2 < m.num_frames; ++t) {
    const auto frame = m.frame(t);
    const auto it = std::max_element(frame.begin(), frame.end(), [](Complex a, Complex b) {
      return std::abs(a) < std::abs(b);
    });
    EXPECT_EQ(static_cast<size_t>(it - frame.begin()), nearest) << "frame " << t;
  }
}

TEST(Stft, IsLinear) {
  AudioClip x = Sine(523, 3000);
  Rng rng(3);
  for (double &v : x.samples) v += 0.1 * rng.Uniform(-1, 1);
  AudioClip scaled = x;
  for (double &v : scaled.samples) v *= -2.5;
  const FrameMatrix a = Stft(x), b = Stft(scaled);
  for (size_t i = 0; i < a.bins.size(); ++i)
    EXPECT_LT(std::abs(b.bins[i] - (-2.5) * a.bins[i]), 1e-10);
}

TEST(Stft, ParsevalPerFrame) {
  Rng rng(11);
  AudioClip x = Silence(4000);
  for (double &v : x.samples) v = rng.Uniform(-1, 1);
  const FrameMatrix m = Stft(x, {25, 10, FramingMode::kValid});
  const std::vector<double> window = HannWindow(m.frame_length);
  for (size_t t = 0; t < m.num_frames; ++t) {
    double time_energy = 0.0;
    for (size_t i = 0; i < m.frame_length; ++i) {
      const double s = x.samples[t * m.hop + i] * window[i];
      time_energy += s * s;
    }
    // Only half the spectrum is stored; mirror the interior bins.
    double spec_energy = 0.0;
    const auto frame = m.frame(t);
    for (size_t k = 0; k < m.num_bins; ++k) {
      const double e = std::norm(frame[k]);
      spec_energy += (k == 0 || k + 1 == m.num_bins) ? e : 2.0 * e;
    }
    spec_energy /= static_cast<double>(m.fft_size);
    EXPECT_NEAR(spec_energy / time_energy, 1.0, 1e-6);
  }
}

TEST(Stft, ErrorCases) {
  try {
    Stft(Silence(0));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptySignal);
  }
  try {
    Stft(Silence(1000), {10, 25, FramingMode::kCentered});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidFraming);
  }
}

TEST(Stft, ShortClipIsReflectionPadded) {
  const FrameMatrix m = Stft(Sine(440, 100));
  EXPECT_EQ(m.num_frames, 1u);
  double energy = 0.0;
  for (const auto &b : m.bins) energy += std::norm(b);
  EXPECT_GT(energy, 0.0);
}

TEST(Resample, SameRateIsIdentity) {
  const AudioClip x = Sine(440, 5000);
  const AudioClip y = Resample(x, 16000);
  EXPECT_EQ(y.samples, x.samples);
}

TEST(Resample, LengthFollowsRatio) {
  EXPECT_EQ(Resample(Silence(24800), 8000).samples.size(), 12400u);
  EXPECT_EQ(Resample(Silence(1000), 22050).samples.size(), 1378u);  // round(1378.125)
}

TEST(Resample, DownsamplingKeepsToneFrequency) {
  const AudioClip y = Resample(Sine(440, 16000), 8000);
  EXPECT_EQ(y.sample_rate, 8000);
  EXPECT_NEAR(DominantFrequency(y), 440.0, 4.4);
  ASSERT_EQ(y.provenance.size(), 1u);
}

TEST(Resample, RoundTripOfBandLimitedSignal) {
  AudioClip x = Silence(16000);
  for (size_t i = 0; i < x.samples.size(); ++i) {
    const double t = i / 16000.0;
    x.samples[i] = 0.4 * std::sin(2 * M_PI * 300 * t) + 0.3 * std::sin(2 * M_PI * 1234 * t) +
                   0.2 * std::sin(2 * M_PI * 2900 * t + 0.3);
  }
  const AudioClip back = Resample(Resample(x, 11025), 16000);
  ASSERT_EQ(back.samples.size(), x.samples.size());
  // Skip the edges, where the kernel runs off the signal.
  double err = 0.0, ref = 0.0;
  for (size_t i = 400; i + 400 < x.samples.size(); ++i) {
    err += std::pow(back.samples[i] - x.samples[i], 2);
    ref += std::pow(x.samples[i], 2);
  }
  EXPECT_LT(std::sqrt(err / ref), 1e-2);
}

TEST(DominantFrequency, SineAndDc) {
  EXPECT_NEAR(DominantFrequency(Sine(440, 16000)), 440.0, 2.0);
  AudioClip dc = Silence(8192);
  for (double &v : dc.samples) v = 0.3;
  EXPECT_EQ(DominantFrequency(dc), 0.0);
}

TEST(DominantFrequency, SemitoneResampling) {
  // Resampling by 2^(-1/12) and playing back at the original rate raises the
  // pitch by one semitone.
  const AudioClip x = Sine(440, 16000);
  AudioClip y = x;
  y.samples = ResampleSignal(x.samples, std::pow(2.0, -1.0 / 12.0));
  EXPECT_NEAR(DominantFrequency(y), 440.0 * std::pow(2.0, 1.0 / 12.0), 2.0);
}

TEST(DominantFrequency, TooShort) {
  try {
    DominantFrequency(Silence(4095));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kSignalTooShort);
  }
}

}  // namespace
}  // namespace interj

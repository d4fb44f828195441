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

#ifndef INTERJ_DSP_H_
#define INTERJ_DSP_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "interj/audio_io.h"

namespace interj {

using Complex = std::complex<double>;

size_t NextPowerOfTwo(size_t n);

// In-place iterative radix-2 FFT. data.size() must be a power of two.
void Fft(std::span<Complex> data, bool inverse = false);

// Spectrum of a real signal zero-padded to fft_size (power of two), bins
// 0..fft_size/2 inclusive.
std::vector<Complex> RealFft(std::span<const double> signal, size_t fft_size);

// Periodic Hann window of the given length.
std::vector<double> HannWindow(size_t length);

enum class FramingMode {
  kCentered,  // reflection-padded by half a frame; 1 + floor(len / hop) frames
  kValid,     // no padding; 1 + floor((len - frame) / hop) frames
};

struct StftConfig {
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  FramingMode mode = FramingMode::kCentered;
};

// Short-time spectra, row-major: frame t occupies bins [t*num_bins, (t+1)*num_bins).
struct FrameMatrix {
  std::vector<Complex> bins;
  size_t num_frames = 0;
  size_t num_bins = 0;
  size_t frame_length = 0;
  size_t hop = 0;
  size_t fft_size = 0;
  int sample_rate = 0;
  FramingMode mode = FramingMode::kCentered;

  std::span<const Complex> frame(size_t t) const {
    return {bins.data() + t * num_bins, num_bins};
  }
  double bin_hz() const { return static_cast<double>(sample_rate) / fft_size; }
};

size_t FrameLengthSamples(double frame_ms, int sample_rate);
size_t FrameCount(size_t signal_length, size_t frame_length, size_t hop,
                  FramingMode mode);

// Hann-windowed STFT. Throws kEmptySignal or kInvalidFraming.
FrameMatrix Stft(const AudioClip &clip, const StftConfig &config = {});

// Band-limited resampling of a raw buffer by `ratio` (output/input rate);
// output length is round(len * ratio).
std::vector<double> ResampleSignal(std::span<const double> signal,
                                   double ratio);

// Resamples to new_rate and records the step in the provenance.
AudioClip Resample(const AudioClip &clip, int new_rate);

// Frequency of the strongest component, from a Hann-windowed FFT over the
// whole clip with parabolic peak refinement. Requires >= 4096 samples.
double DominantFrequency(const AudioClip &clip);

}  // namespace interj

#endif  // INTERJ_DSP_H_

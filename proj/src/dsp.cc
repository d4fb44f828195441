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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <unordered_map>

#include "interj/error.h"

namespace interj {

size_t NextPowerOfTwo(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace {

// Forward twiddles exp(-2 pi i k / n) for k < n / 2, each computed directly
// so rounding error does not accumulate across stages.
const std::vector<Complex> &Twiddles(size_t n) {
  thread_local std::unordered_map<size_t, std::vector<Complex>> cache;
  auto [it, inserted] = cache.try_emplace(n);
  if (inserted) {
    it->second.resize(n / 2);
    for (size_t k = 0; k < n / 2; ++k)
      it->second[k] = std::polar(1.0, -2.0 * M_PI * static_cast<double>(k) / n);
  }
  return it->second;
}

}  // namespace

void Fft(std::span<Complex> data, bool inverse) {
  const size_t n = data.size();
  if (n <= 1) return;
  if (n & (n - 1))
    throw Error(ErrorCode::kInvalidFraming,
                "FFT size " + std::to_string(n) + " is not a power of two");
  // Bit-reversal permutation.
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  const std::vector<Complex> &tw = Twiddles(n);
  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t half = len / 2, stride = n / len;
    for (size_t k = 0; k < half; ++k) {
      const Complex w = inverse ? std::conj(tw[k * stride]) : tw[k * stride];
      for (size_t start = 0; start < n; start += len) {
        const Complex u = data[start + k];
        // Plain product; std::complex operator* adds NaN/Inf recovery.
        const Complex b = data[start + k + half];
        const Complex v(b.real() * w.real() - b.imag() * w.imag(),
                        b.real() * w.imag() + b.imag() * w.real());
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    for (auto &x : data) x /= static_cast<double>(n);
  }
}

std::vector<Complex> RealFft(std::span<const double> signal, size_t fft_size) {
  std::vector<Complex> buf(fft_size);
  const size_t n = std::min(signal.size(), fft_size);
  for (size_t i = 0; i < n; ++i) buf[i] = signal[i];
  Fft(buf);
  buf.resize(fft_size / 2 + 1);
  return buf;
}

std::vector<double> HannWindow(size_t length) {
  std::vector<double> w(length);
  for (size_t i = 0; i < length; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / static_cast<double>(length));
  return w;
}

size_t FrameLengthSamples(double frame_ms, int sample_rate) {
  return static_cast<size_t>(std::llround(frame_ms * sample_rate / 1000.0));
}

size_t FrameCount(size_t signal_length, size_t frame_length, size_t hop,
                  FramingMode mode) {
  if (mode == FramingMode::kCentered) return 1 + signal_length / hop;
  if (signal_length < frame_length) return 0;
  return 1 + (signal_length - frame_length) / hop;
}

namespace {

size_t ReflectIndex(long long i, size_t len) {
  if (len == 1) return 0;
  const long long period = 2 * static_cast<long long>(len - 1);
  i %= period;
  if (i < 0) i += period;
  if (i >= static_cast<long long>(len)) i = period - i;
  return static_cast<size_t>(i);
}

}  // namespace

FrameMatrix Stft(const AudioClip &clip, const StftConfig &config) {
  if (clip.samples.empty())
    throw Error(ErrorCode::kEmptySignal, "cannot frame an empty clip");
  const size_t frame = FrameLengthSamples(config.frame_ms, clip.sample_rate);
  const size_t hop = FrameLengthSamples(config.hop_ms, clip.sample_rate);
  if (hop == 0 || frame == 0 || hop > frame)
    throw Error(ErrorCode::kInvalidFraming,
                "hop " + std::to_string(hop) + " vs frame " +
                    std::to_string(frame) + " samples");
  const size_t len = clip.samples.size();
  if (config.mode == FramingMode::kValid && len < frame)
    throw Error(ErrorCode::kSignalTooShort,
                "clip shorter than one frame (" + std::to_string(len) + " < " +
                    std::to_string(frame) + ")");

  FrameMatrix m;
  m.frame_length = frame;
  m.hop = hop;
  m.fft_size = NextPowerOfTwo(frame);
  m.num_bins = m.fft_size / 2 + 1;
  m.num_frames = FrameCount(len, frame, hop, config.mode);
  m.sample_rate = clip.sample_rate;
  m.mode = config.mode;
  m.bins.resize(m.num_frames * m.num_bins);

  const std::vector<double> window = HannWindow(frame);
  const long long offset =
      config.mode == FramingMode::kCentered ? static_cast<long long>(frame / 2) : 0;
  auto sample = [&](size_t t, size_t i) {
    const long long j = static_cast<long long>(t * hop) - offset + static_cast<long long>(i);
    const double x = (j >= 0 && j < static_cast<long long>(len))
                         ? clip.samples[static_cast<size_t>(j)]
                         : clip.samples[ReflectIndex(j, len)];
    return x * window[i];
  };
  // Two real frames per complex FFT: frame t in the real part, t + 1 in the
  // imaginary part, separated afterwards by conjugate symmetry.
  const size_t n = m.fft_size;
  std::vector<Complex> buf(n);
  for (size_t t = 0; t < m.num_frames; t += 2) {
    const bool pair = t + 1 < m.num_frames;
    std::fill(buf.begin(), buf.end(), Complex());
    for (size_t i = 0; i < frame; ++i)
      buf[i] = Complex(sample(t, i), pair ? sample(t + 1, i) : 0.0);
    Fft(buf);
    Complex *first = m.bins.data() + t * m.num_bins;
    Complex *second = pair ? first + m.num_bins : nullptr;
    for (size_t k = 0; k < m.num_bins; ++k) {
      const Complex z = buf[k];
      const Complex zc = std::conj(buf[(n - k) % n]);
      first[k] = 0.5 * (z + zc);
      if (pair) second[k] = Complex(0.0, -0.5) * (z - zc);
    }
  }
  return m;
}

namespace {

constexpr double kZeroCrossingsPerSide = 32.0;
constexpr double kKaiserBeta = 8.0;
constexpr double kPassbandFraction = 0.97;
constexpr double kTableResolution = 512.0;

double Sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  return std::sin(M_PI * x) / (M_PI * x);
}

}  // namespace

std::vector<double> ResampleSignal(std::span<const double> signal,
                                   double ratio) {
  if (!(ratio > 0.0))
    throw Error(ErrorCode::kConfigError, "resampling ratio must be positive");
  const size_t out_len =
      static_cast<size_t>(std::llround(signal.size() * ratio));
  std::vector<double> out(out_len, 0.0);
  if (signal.empty()) return out;
  if (ratio == 1.0) {
    std::copy(signal.begin(), signal.end(), out.begin());
    return out;
  }
  // Cutoff in cycles per input sample (relative to input Nyquist).
  const double cutoff = std::min(1.0, ratio) * kPassbandFraction;
  const double half_width = kZeroCrossingsPerSide / cutoff;
  // Kernel tabulated against distance measured in zero crossings.
  const size_t table_len =
      static_cast<size_t>(kZeroCrossingsPerSide * kTableResolution) + 2;
  std::vector<double> table(table_len);
  const double norm = std::cyl_bessel_i(0.0, kKaiserBeta);
  for (size_t j = 0; j < table_len; ++j) {
    const double z = static_cast<double>(j) / kTableResolution;
    const double u = std::min(1.0, z / kZeroCrossingsPerSide);
    table[j] = cutoff * Sinc(z) *
               std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(1.0 - u * u)) /
               norm;
  }
  const auto n = static_cast<long long>(signal.size());
  for (size_t i = 0; i < out_len; ++i) {
    const double t = static_cast<double>(i) / ratio;
    const long long lo =
        std::max(0LL, static_cast<long long>(std::ceil(t - half_width)));
    const long long hi =
        std::min(n - 1, static_cast<long long>(std::floor(t + half_width)));
    double acc = 0.0;
    for (long long k = lo; k <= hi; ++k) {
      const double pos = std::abs(t - static_cast<double>(k)) * cutoff *
                         kTableResolution;
      const size_t j = static_cast<size_t>(pos);
      if (j + 1 >= table_len) continue;
      const double frac = pos - static_cast<double>(j);
      const double h = table[j] + frac * (table[j + 1] - table[j]);
      acc += signal[static_cast<size_t>(k)] * h;
    }
    out[i] = acc;
  }
  return out;
}

AudioClip Resample(const AudioClip &clip, int new_rate) {
  if (new_rate <= 0)
    throw Error(ErrorCode::kConfigError, "new sample rate must be positive");
  if (new_rate == clip.sample_rate) return clip;
  const double ratio = static_cast<double>(new_rate) / clip.sample_rate;
  AudioClip out = DeriveClip(clip, ResampleSignal(clip.samples, ratio), new_rate);
  out.provenance.push_back("resample=" + std::to_string(new_rate));
  return out;
}

double DominantFrequency(const AudioClip &clip) {
  const size_t len = clip.samples.size();
  if (len < 4096)
    throw Error(ErrorCode::kSignalTooShort,
                "dominant frequency needs >= 4096 samples, got " +
                    std::to_string(len));
  const std::vector<double> window = HannWindow(len);
  std::vector<double> windowed(len);
  for (size_t i = 0; i < len; ++i) windowed[i] = clip.samples[i] * window[i];
  const size_t fft_size = NextPowerOfTwo(len);
  const std::vector<Complex> spec = RealFft(windowed, fft_size);
  size_t peak = 0;
  double best = -1.0;
  for (size_t k = 0; k < spec.size(); ++k) {
    const double mag = std::abs(spec[k]);
    if (mag > best) {
      best = mag;
      peak = k;
    }
  }
  double offset = 0.0;
  if (peak > 0 && peak + 1 < spec.size()) {
    const double floor = 1e-300;
    const double a = std::log(std::abs(spec[peak - 1]) + floor);
    const double b = std::log(std::abs(spec[peak]) + floor);
    const double c = std::log(std::abs(spec[peak + 1]) + floor);
    const double denom = a - 2.0 * b + c;
    if (denom < 0.0) offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }
  return (static_cast<double>(peak) + offset) * clip.sample_rate /
         static_cast<double>(fft_size);
}

}  // namespace interj

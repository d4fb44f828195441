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

#include "interj/features.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "interj/error.h"

namespace interj {

namespace {

constexpr double kSlaneyLinearHz = 200.0 / 3.0;
constexpr double kSlaneyLogStartHz = 1000.0;
constexpr double kSlaneyLogStartMel = kSlaneyLogStartHz / kSlaneyLinearHz;
const double kSlaneyLogStep = std::log(6.4) / 27.0;

constexpr double kChromaMinHz = 27.5;

}  // namespace

double MelFilterbank::HzToMel(double hz) {
  if (hz < kSlaneyLogStartHz) return hz / kSlaneyLinearHz;
  return kSlaneyLogStartMel + std::log(hz / kSlaneyLogStartHz) / kSlaneyLogStep;
}

double MelFilterbank::MelToHz(double mel) {
  if (mel < kSlaneyLogStartMel) return mel * kSlaneyLinearHz;
  return kSlaneyLogStartHz * std::exp(kSlaneyLogStep * (mel - kSlaneyLogStartMel));
}

MelFilterbank::MelFilterbank(size_t num_mels, size_t fft_size, int sample_rate,
                             double fmin, double fmax) {
  if (fmax < 0.0) fmax = sample_rate / 2.0;
  const size_t num_bins = fft_size / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate) / fft_size;
  const double mel_lo = HzToMel(fmin), mel_hi = HzToMel(fmax);
  std::vector<double> edges(num_mels + 2);
  for (size_t i = 0; i < edges.size(); ++i)
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (num_mels + 1));

  first_bin_.resize(num_mels);
  weights_.resize(num_mels);
  centers_.resize(num_mels);
  for (size_t m = 0; m < num_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    const double norm = 2.0 / (hi - lo);
    centers_[m] = mid;
    std::vector<double> row;
    size_t first = num_bins;
    for (size_t k = 0; k < num_bins; ++k) {
      const double f = k * bin_hz;
      const double w = std::max(0.0, std::min((f - lo) / (mid - lo), (hi - f) / (hi - mid)));
      if (w <= 0.0) {
        if (first != num_bins) break;
        continue;
      }
      if (first == num_bins) first = k;
      row.push_back(w * norm);
    }
    first_bin_[m] = first == num_bins ? 0 : first;
    weights_[m] = std::move(row);
  }
}

double MelFilterbank::weight(size_t m, size_t bin) const {
  const size_t first = first_bin_[m];
  if (bin < first || bin >= first + weights_[m].size()) return 0.0;
  return weights_[m][bin - first];
}

void MelFilterbank::Apply(std::span<const double> power, std::span<double> out) const {
  for (size_t m = 0; m < num_mels(); ++m) {
    double acc = 0.0;
    const auto &row = weights_[m];
    for (size_t j = 0; j < row.size(); ++j) acc += row[j] * power[first_bin_[m] + j];
    out[m] = acc;
  }
}

int PitchClass(double hz) {
  const auto semis = static_cast<long long>(std::llround(12.0 * std::log2(hz / 440.0)));
  return static_cast<int>(((semis % 12) + 12 + 9) % 12);
}

namespace {

// Pitch class of every bin, -1 for bins at or below the chroma floor.
std::vector<int> BinClasses(size_t num_bins, double bin_hz) {
  std::vector<int> classes(num_bins, -1);
  for (size_t k = 1; k < num_bins; ++k) {
    const double f = k * bin_hz;
    if (f > kChromaMinHz) classes[k] = PitchClass(f);
  }
  return classes;
}

std::array<double, kNumChroma> ChromaFromClasses(std::span<const double> magnitude,
                                                 const std::vector<int> &classes) {
  std::array<double, kNumChroma> c{};
  for (size_t k = 0; k < magnitude.size(); ++k)
    if (classes[k] >= 0) c[static_cast<size_t>(classes[k])] += magnitude[k];
  const double peak = *std::max_element(c.begin(), c.end());
  if (peak > 0.0)
    for (double &v : c) v /= peak;
  return c;
}

}  // namespace

std::array<double, kNumChroma> ChromaFrame(std::span<const double> magnitude,
                                           double bin_hz) {
  return ChromaFromClasses(magnitude, BinClasses(magnitude.size(), bin_hz));
}

namespace {

// Contiguous bin ranges [begin, end) of the contrast sub-bands, full band last.
using BandRanges = std::array<std::pair<size_t, size_t>, kNumContrast>;

BandRanges ContrastBands(size_t num_bins, double bin_hz, double nyquist_hz,
                         const FeatureConfig &config) {
  const size_t sub_bands = config.contrast_edges.size() + 1;
  if (sub_bands + 1 != kNumContrast)
    throw Error(ErrorCode::kConfigError, "spectral contrast needs 6 sub-bands");
  BandRanges ranges{};
  double lo = 0.0;
  for (size_t b = 0; b < sub_bands; ++b) {
    const bool last = b + 1 == sub_bands;
    const double hi = last ? nyquist_hz : config.contrast_edges[b];
    size_t begin = num_bins, end = 0;
    for (size_t k = 0; k < num_bins; ++k) {
      const double f = k * bin_hz;
      if (f >= lo && (f < hi || (last && f <= hi))) {
        begin = std::min(begin, k);
        end = k + 1;
      }
    }
    ranges[b] = begin < end ? std::make_pair(begin, end) : std::make_pair<size_t, size_t>(0, 0);
    lo = hi;
  }
  ranges[sub_bands] = {0, num_bins};
  return ranges;
}

std::array<double, kNumContrast> ContrastFromBands(std::span<const double> magnitude,
                                                   const BandRanges &ranges,
                                                   double quantile,
                                                   std::vector<double> *scratch) {
  std::array<double, kNumContrast> out{};
  for (size_t b = 0; b < kNumContrast; ++b) {
    auto &values = *scratch;
    values.assign(magnitude.begin() + static_cast<long>(ranges[b].first),
                  magnitude.begin() + static_cast<long>(ranges[b].second));
    const size_t n = values.size();
    if (n == 0) continue;
    const size_t k = std::max<size_t>(1, static_cast<size_t>(std::floor(quantile * n)));
    double peak = 0.0, valley = 0.0;
    std::nth_element(values.begin(), values.begin() + static_cast<long>(k - 1), values.end());
    for (size_t i = 0; i < k; ++i) valley += values[i];
    std::nth_element(values.begin(), values.begin() + static_cast<long>(n - k), values.end());
    for (size_t i = n - k; i < n; ++i) peak += values[i];
    peak = std::max(peak / k, kLogFloor);
    valley = std::max(valley / k, kLogFloor);
    out[b] = std::log(peak) - std::log(valley);
  }
  return out;
}

}  // namespace

std::array<double, kNumContrast> ContrastFrame(std::span<const double> magnitude,
                                               double bin_hz, double nyquist_hz,
                                               const FeatureConfig &config) {
  std::vector<double> scratch;
  return ContrastFromBands(magnitude,
                           ContrastBands(magnitude.size(), bin_hz, nyquist_hz, config),
                           config.contrast_quantile, &scratch);
}

std::array<double, kNumTonnetz> TonnetzFrame(std::span<const double> chroma) {
  std::array<double, kNumTonnetz> out{};
  double total = 0.0;
  for (double v : chroma) total += std::abs(v);
  if (total <= 0.0) return out;
  for (size_t c = 0; c < chroma.size(); ++c) {
    const double w = chroma[c] / total;
    const double pc = static_cast<double>(c);
    out[0] += w * std::sin(pc * 7.0 * M_PI / 6.0);
    out[1] += w * std::cos(pc * 7.0 * M_PI / 6.0);
    out[2] += w * std::sin(pc * 3.0 * M_PI / 2.0);
    out[3] += w * std::cos(pc * 3.0 * M_PI / 2.0);
    out[4] += w * 0.5 * std::sin(pc * 2.0 * M_PI / 3.0);
    out[5] += w * 0.5 * std::cos(pc * 2.0 * M_PI / 3.0);
  }
  return out;
}

std::vector<double> DctII(std::span<const double> x, size_t count) {
  const size_t n = x.size();
  std::vector<double> out(count, 0.0);
  for (size_t k = 0; k < count; ++k) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i)
      acc += x[i] * std::cos(M_PI * k * (2.0 * i + 1.0) / (2.0 * n));
    out[k] = acc * (k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n));
  }
  return out;
}

namespace {

// Frame-averaged blocks computed from one STFT.
struct BlockMeans {
  std::vector<double> mfcc, mel, chroma, contrast, tonnetz;
};

BlockMeans ComputeBlocks(const AudioClip &clip, const FeatureConfig &config) {
  const size_t frame = FrameLengthSamples(config.stft.frame_ms, clip.sample_rate);
  if (clip.samples.size() < frame)
    throw Error(ErrorCode::kSignalTooShort,
                "features need at least one frame (" + std::to_string(frame) +
                    " samples), got " + std::to_string(clip.samples.size()));
  const FrameMatrix spec = Stft(clip, config.stft);
  const MelFilterbank bank(kNumMel, spec.fft_size, clip.sample_rate);
  const double bin_hz = spec.bin_hz();
  const double nyquist = clip.sample_rate / 2.0;
  const std::vector<int> classes = BinClasses(spec.num_bins, bin_hz);

  const BandRanges bands = ContrastBands(spec.num_bins, bin_hz, nyquist, config);

  BlockMeans out{std::vector<double>(kNumMfcc), std::vector<double>(kNumMel),
                 std::vector<double>(kNumChroma), std::vector<double>(kNumContrast),
                 std::vector<double>(kNumTonnetz)};
  std::vector<double> magnitude(spec.num_bins), power(spec.num_bins);
  std::vector<double> mel(kNumMel), log_mel_sum(kNumMel, 0.0), scratch;
  for (size_t t = 0; t < spec.num_frames; ++t) {
    const auto bins = spec.frame(t);
    for (size_t k = 0; k < spec.num_bins; ++k) {
      power[k] = std::norm(bins[k]);
      magnitude[k] = std::sqrt(power[k]);
    }
    bank.Apply(power, mel);
    for (size_t m = 0; m < kNumMel; ++m) {
      out.mel[m] += mel[m];
      log_mel_sum[m] += std::log(mel[m] + kLogFloor);
    }
    const auto chroma = ChromaFromClasses(magnitude, classes);
    for (size_t c = 0; c < kNumChroma; ++c) out.chroma[c] += chroma[c];
    const auto contrast =
        ContrastFromBands(magnitude, bands, config.contrast_quantile, &scratch);
    for (size_t b = 0; b < kNumContrast; ++b) out.contrast[b] += contrast[b];
    const auto tonnetz = TonnetzFrame(chroma);
    for (size_t d = 0; d < kNumTonnetz; ++d) out.tonnetz[d] += tonnetz[d];
  }
  const double inv = 1.0 / static_cast<double>(spec.num_frames);
  for (auto *block : {&out.mel, &out.chroma, &out.contrast, &out.tonnetz})
    for (double &v : *block) v *= inv;
  // The DCT is linear, so the frame mean of the cepstra is the DCT of the
  // frame mean of the log energies.
  for (double &v : log_mel_sum) v *= inv;
  out.mfcc = DctII(log_mel_sum, kNumMfcc);
  return out;
}

}  // namespace

std::vector<double> MfccMeans(const AudioClip &clip, const FeatureConfig &config) {
  return ComputeBlocks(clip, config).mfcc;
}

std::vector<double> MelMeans(const AudioClip &clip, const FeatureConfig &config) {
  return ComputeBlocks(clip, config).mel;
}

std::vector<double> ChromaMeans(const AudioClip &clip, const FeatureConfig &config) {
  return ComputeBlocks(clip, config).chroma;
}

std::vector<double> SpectralContrastMeans(const AudioClip &clip,
                                          const FeatureConfig &config) {
  return ComputeBlocks(clip, config).contrast;
}

std::vector<double> TonnetzMeans(const AudioClip &clip, const FeatureConfig &config) {
  return ComputeBlocks(clip, config).tonnetz;
}

FeatureVector Featurize(const AudioClip &clip, const FeatureConfig &config) {
  if (config.canonical_seconds > 0.0) {
    const auto expected = static_cast<size_t>(
        std::llround(config.canonical_seconds * clip.sample_rate));
    if (clip.samples.size() != expected)
      throw Error(ErrorCode::kLengthMismatch,
                  "expected " + std::to_string(expected) + " samples, got " +
                      std::to_string(clip.samples.size()));
  }
  const BlockMeans blocks = ComputeBlocks(clip, config);
  FeatureVector fv;
  auto put = [&](const std::vector<double> &b, size_t offset) {
    std::copy(b.begin(), b.end(), fv.values.begin() + static_cast<long>(offset));
  };
  put(blocks.mfcc, kMfccOffset);
  put(blocks.mel, kMelOffset);
  put(blocks.chroma, kChromaOffset);
  put(blocks.contrast, kContrastOffset);
  put(blocks.tonnetz, kTonnetzOffset);
  return fv;
}

namespace {

std::string CsvField(std::string s) {
  for (char &c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return s;
}

}  // namespace

void WriteFeatureCsv(const std::vector<FeatureRow> &rows, const std::string &path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot create " + path);
  out << "label,speaker,provenance";
  char buf[40];
  for (size_t i = 0; i < kFeatureDim; ++i) {
    std::snprintf(buf, sizeof buf, ",f%03zu", i);
    out << buf;
  }
  out << '\n';
  for (const auto &row : rows) {
    out << CsvField(row.label) << ',' << CsvField(row.speaker) << ','
        << CsvField(row.provenance);
    for (double v : row.features.values) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path);
}

std::vector<FeatureRow> ReadFeatureCsv(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("label,speaker,provenance", 0) != 0)
    throw Error(ErrorCode::kCorruptHeader, "feature CSV header missing in " + path);
  const auto header_cols = std::count(line.begin(), line.end(), ',') + 1;
  if (header_cols != static_cast<long>(kFeatureDim + 3))
    throw Error(ErrorCode::kShapeMismatch,
                "feature CSV has " + std::to_string(header_cols - 3) +
                    " feature columns, expected " + std::to_string(kFeatureDim));
  std::vector<FeatureRow> rows;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != kFeatureDim + 3)
      throw Error(ErrorCode::kShapeMismatch,
                  path + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(kFeatureDim + 3) + " fields");
    FeatureRow row;
    row.label = fields[0];
    row.speaker = fields[1];
    row.provenance = fields[2];
    for (size_t i = 0; i < kFeatureDim; ++i) {
      try {
        row.features.values[i] = std::stod(fields[i + 3]);
      } catch (const std::exception &) {
        throw Error(ErrorCode::kCorruptHeader,
                    path + ":" + std::to_string(line_no) + ": bad number");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace interj

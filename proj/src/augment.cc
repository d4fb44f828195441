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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "interj/dsp.h"
#include "interj/error.h"
#include "interj/random.h"

namespace interj {

namespace {

std::string FormatNumber(double v, bool signed_form = false) {
  char buf[32];
  std::snprintf(buf, sizeof buf, signed_form ? "%+.6g" : "%.6g", v);
  return buf;
}

double SampleAt(std::span<const double> x, long long i) {
  if (i < 0 || i >= static_cast<long long>(x.size())) return 0.0;
  return x[static_cast<size_t>(i)];
}

// Similarity of the candidate segment starting at `cand` to the reference
// segment starting at `ref`, normalized by the candidate energy.
double Similarity(std::span<const double> x, long long ref, long long cand,
                  size_t length) {
  double cross = 0.0, energy = 0.0;
  for (size_t i = 0; i < length; ++i) {
    const double b = SampleAt(x, cand + static_cast<long long>(i));
    cross += SampleAt(x, ref + static_cast<long long>(i)) * b;
    energy += b * b;
  }
  return cross / std::sqrt(energy + 1e-18);
}

std::vector<double> Wsola(std::span<const double> x, double factor,
                          size_t segment, size_t tolerance) {
  const size_t out_len =
      static_cast<size_t>(std::llround(static_cast<double>(x.size()) / factor));
  const size_t hop = segment / 2;
  const std::vector<double> window = HannWindow(segment);
  // Output frame k starts at k * hop - hop; the buffer is shifted by hop.
  const size_t frames = out_len / hop + 3;
  std::vector<double> acc(frames * hop + segment, 0.0);
  std::vector<double> weight(acc.size(), 0.0);

  const auto tol = static_cast<long long>(tolerance);
  const long long coarse = 2;
  long long prev_start = 0;
  for (size_t k = 0; k < frames; ++k) {
    const double out_center =
        static_cast<double>(k) * hop - static_cast<double>(hop) + segment / 2.0;
    const auto ideal = static_cast<long long>(
        std::llround(out_center * factor - segment / 2.0));
    long long start = ideal;
    if (k > 0) {
      const long long natural = prev_start + static_cast<long long>(hop);
      // Coarse pass over even offsets, nearest first, then refine around the
      // best. Ties keep the smaller displacement.
      long long best_delta = 0;
      double best = Similarity(x, natural, ideal, hop);
      for (long long d = coarse; d <= tol; d += coarse) {
        for (long long delta : {-d, d}) {
          const double s = Similarity(x, natural, ideal + delta, hop);
          if (s > best) {
            best = s;
            best_delta = delta;
          }
        }
      }
      const long long center = best_delta;
      for (long long delta = center - coarse + 1; delta < center + coarse;
           ++delta) {
        if (delta == center || delta < -tol || delta > tol) continue;
        const double s = Similarity(x, natural, ideal + delta, hop);
        if (s > best) {
          best = s;
          best_delta = delta;
        }
      }
      start = ideal + best_delta;
    }
    const size_t out_start = k * hop;
    for (size_t i = 0; i < segment; ++i) {
      acc[out_start + i] +=
          window[i] * SampleAt(x, start + static_cast<long long>(i));
      weight[out_start + i] += window[i];
    }
    prev_start = start;
  }

  std::vector<double> out(out_len);
  for (size_t i = 0; i < out_len; ++i) {
    const double w = weight[i + hop];
    out[i] = w > 1e-9 ? acc[i + hop] / w : 0.0;
  }
  return out;
}

void Clamp(std::vector<double> *x) {
  for (double &v : *x) v = std::clamp(v, -1.0, 1.0);
}

}  // namespace

AudioClip ChangeTempo(const AudioClip &clip, double factor,
                      const WsolaConfig &config) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw Error(ErrorCode::kPlanInvalid,
                "tempo factor must be positive, got " + FormatNumber(factor));
  const size_t segment = FrameLengthSamples(config.segment_ms, clip.sample_rate);
  const size_t tolerance =
      FrameLengthSamples(config.tolerance_ms, clip.sample_rate);
  if (clip.samples.size() < segment)
    throw Error(ErrorCode::kSignalTooShort,
                "tempo change needs at least one " + FormatNumber(config.segment_ms) +
                    " ms segment");
  std::vector<double> y = Wsola(clip.samples, factor, segment, tolerance);
  Clamp(&y);
  AudioClip out = DeriveClip(clip, std::move(y), clip.sample_rate);
  out.provenance.push_back("tempo=" + FormatNumber(factor));
  return out;
}

AudioClip ShiftPitch(const AudioClip &clip, double semitones,
                     const WsolaConfig &config) {
  if (!std::isfinite(semitones))
    throw Error(ErrorCode::kPlanInvalid, "semitones must be finite");
  const size_t segment = FrameLengthSamples(config.segment_ms, clip.sample_rate);
  if (clip.samples.size() < segment)
    throw Error(ErrorCode::kSignalTooShort,
                "pitch shift needs at least one " + FormatNumber(config.segment_ms) +
                    " ms segment");
  // Playing the resampled buffer at the original rate multiplies every
  // frequency by 1 / ratio = 2^(semitones / 12).
  const double ratio = std::pow(2.0, -semitones / 12.0);
  const std::vector<double> resampled = ResampleSignal(clip.samples, ratio);
  if (resampled.size() < segment)
    throw Error(ErrorCode::kSignalTooShort, "clip too short after resampling");
  const size_t tolerance =
      FrameLengthSamples(config.tolerance_ms, clip.sample_rate);
  std::vector<double> y = Wsola(resampled, ratio, segment, tolerance);
  y.resize(clip.samples.size(), 0.0);
  Clamp(&y);
  AudioClip out = DeriveClip(clip, std::move(y), clip.sample_rate);
  out.provenance.push_back("pitch=" + FormatNumber(semitones, true));
  return out;
}

std::vector<double> WeightedMix(std::span<const double> clip,
                                std::span<const double> scene, double w_orig) {
  if (clip.size() != scene.size())
    throw Error(ErrorCode::kLengthMismatch, "scene segment length differs from clip");
  const double w_bgn = 1.0 - w_orig;
  std::vector<double> out(clip.size());
  for (size_t i = 0; i < clip.size(); ++i)
    out[i] = w_orig * clip[i] + w_bgn * scene[i];
  return out;
}

std::vector<double> SceneSegment(std::span<const double> scene, size_t length,
                                 size_t offset) {
  if (scene.empty()) throw Error(ErrorCode::kEmptyScene, "scene has no samples");
  std::vector<double> seg(length);
  for (size_t i = 0; i < length; ++i) seg[i] = scene[(offset + i) % scene.size()];
  return seg;
}

AudioClip MixBackground(const AudioClip &clip, const AudioClip &scene,
                        const std::string &scene_name, double w_orig,
                        uint64_t seed) {
  if (scene.samples.empty())
    throw Error(ErrorCode::kEmptyScene, "scene '" + scene_name + "' is empty");
  if (!(w_orig >= 0.0 && w_orig <= 1.0))
    throw Error(ErrorCode::kPlanInvalid,
                "w_orig must lie in [0, 1], got " + FormatNumber(w_orig));
  if (scene.sample_rate != clip.sample_rate)
    throw Error(ErrorCode::kConfigError,
                "scene '" + scene_name + "' sample rate differs from clip");
  const size_t n = clip.samples.size();
  const size_t m = scene.samples.size();
  Rng rng(seed);
  const size_t offset = m >= n ? static_cast<size_t>(rng.UniformInt(m - n))
                               : static_cast<size_t>(rng.UniformInt(m - 1));
  std::vector<double> mixed =
      WeightedMix(clip.samples, SceneSegment(scene.samples, n, offset), w_orig);
  Clamp(&mixed);
  AudioClip out = DeriveClip(clip, std::move(mixed), clip.sample_rate);
  out.provenance.push_back("bgn=" + scene_name + ":w" + FormatNumber(w_orig) +
                           ":o" + std::to_string(offset));
  return out;
}

AudioClip AddWhiteNoise(const AudioClip &clip, double amplitude, uint64_t seed) {
  if (!(amplitude >= 0.0 && amplitude < 1.0))
    throw Error(ErrorCode::kPlanInvalid,
                "white noise amplitude must lie in [0, 1), got " +
                    FormatNumber(amplitude));
  Rng rng(seed);
  std::vector<double> y(clip.samples.size());
  for (size_t i = 0; i < y.size(); ++i)
    y[i] = clip.samples[i] + amplitude * (2.0 * rng.Uniform() - 1.0);
  Clamp(&y);
  AudioClip out = DeriveClip(clip, std::move(y), clip.sample_rate);
  out.provenance.push_back("wn=" + FormatNumber(amplitude));
  return out;
}

size_t AugmentPlan::background_pairs() const {
  size_t b = 0;
  for (const auto &s : scenes) b += s.weights.size();
  return b;
}

void ValidatePlan(const AugmentPlan &plan) {
  const auto &r = plan.ranges;
  for (double f : plan.tempo_factors) {
    if (!(f > 0.0) || !std::isfinite(f))
      throw Error(ErrorCode::kPlanInvalid, "tempo factor " + FormatNumber(f));
    if (!plan.allow_out_of_range && (f < r.min_tempo || f > r.max_tempo))
      throw Error(ErrorCode::kPlanInvalid,
                  "tempo factor " + FormatNumber(f) + " outside [" +
                      FormatNumber(r.min_tempo) + ", " + FormatNumber(r.max_tempo) + "]");
  }
  for (double s : plan.pitch_semitones) {
    if (!std::isfinite(s))
      throw Error(ErrorCode::kPlanInvalid, "semitones must be finite");
    if (!plan.allow_out_of_range && (s < r.min_semitones || s > r.max_semitones))
      throw Error(ErrorCode::kPlanInvalid,
                  "semitones " + FormatNumber(s) + " outside [" +
                      FormatNumber(r.min_semitones) + ", " +
                      FormatNumber(r.max_semitones) + "]");
  }
  for (const auto &scene : plan.scenes) {
    if (scene.clip.samples.empty())
      throw Error(ErrorCode::kEmptyScene, "scene '" + scene.name + "' is empty");
    for (double w : scene.weights) {
      if (!(w >= 0.0 && w <= 1.0))
        throw Error(ErrorCode::kPlanInvalid, "w_orig " + FormatNumber(w));
      if (!plan.allow_out_of_range && (w < r.min_w_orig || w > r.max_w_orig))
        throw Error(ErrorCode::kPlanInvalid,
                    "w_orig " + FormatNumber(w) + " for scene '" + scene.name +
                        "' outside [" + FormatNumber(r.min_w_orig) + ", " +
                        FormatNumber(r.max_w_orig) + "]");
    }
  }
  if (plan.white_noise &&
      !(*plan.white_noise >= 0.0 && *plan.white_noise < 1.0))
    throw Error(ErrorCode::kPlanInvalid,
                "white noise amplitude " + FormatNumber(*plan.white_noise));
}

size_t ExpectedVariantCount(const AugmentPlan &plan) {
  const size_t t = plan.tempo_factors.size();
  const size_t p = plan.pitch_semitones.size();
  const size_t b = plan.background_pairs();
  const size_t variants = plan.compose ? (t + 1) * (p + 1) - 1 : t + p;
  size_t total = variants + b;
  if (plan.compose) total += variants * b;
  if (plan.white_noise) total += 1;
  return total;
}

std::vector<AudioClip> ExpandPlan(const AugmentPlan &plan, const AudioClip &clip,
                                  uint64_t seed) {
  ValidatePlan(plan);
  std::vector<AudioClip> variants;
  for (double f : plan.tempo_factors) variants.push_back(ChangeTempo(clip, f));
  for (double s : plan.pitch_semitones) variants.push_back(ShiftPitch(clip, s));
  if (plan.compose) {
    // Reuse the tempo-only outputs as the starting point of each product.
    for (size_t ti = 0; ti < plan.tempo_factors.size(); ++ti)
      for (double s : plan.pitch_semitones)
        variants.push_back(ShiftPitch(variants[ti], s));
  }

  std::vector<AudioClip> out = variants;
  uint64_t mix_index = 0;
  auto mix_all = [&](const AudioClip &base) {
    for (const auto &scene : plan.scenes)
      for (double w : scene.weights)
        out.push_back(MixBackground(base, scene.clip, scene.name, w,
                                    DeriveSeed(seed, "bgn", mix_index++)));
  };
  mix_all(clip);
  if (plan.compose)
    for (const auto &v : variants) mix_all(v);
  if (plan.white_noise)
    out.push_back(AddWhiteNoise(clip, *plan.white_noise,
                                DeriveSeed(seed, "white_noise")));
  return out;
}

std::string ProvenanceSlug(const AudioClip &clip) {
  std::string slug = clip.provenance_string();
  for (char &c : slug) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                    c == '-' || c == '+' || c == '=' || c == '_';
    if (!ok) c = '_';
  }
  return slug;
}

const std::vector<std::string> &SceneNames() {
  static const std::vector<std::string> names = {
      "baby_gibberish", "ambulance",   "crowd_laughing",
      "football_crowd", "mall",        "passing_bus",
      "rain",           "street_traffic", "tv"};
  return names;
}

namespace {

// One-pole low-pass; alpha in (0, 1], larger passes more.
struct OnePole {
  double alpha, state = 0.0;
  double operator()(double x) { return state += alpha * (x - state); }
};

double PoleFor(double cutoff_hz, int rate) {
  return 1.0 - std::exp(-2.0 * M_PI * cutoff_hz / rate);
}

std::vector<double> RenderScene(size_t kind, size_t n, int rate, Rng &rng) {
  std::vector<double> y(n, 0.0);
  const double dt = 1.0 / rate;
  switch (kind) {
    case 0: {  // baby gibberish: gliding high voice, syllabic bursts
      double phase = 0.0, f0 = 420.0;
      for (size_t i = 0; i < n; ++i) {
        if (i % (rate / 8) == 0) f0 = rng.Uniform(330.0, 520.0);
        phase += 2.0 * M_PI * f0 * dt;
        const double env = std::pow(std::sin(M_PI * 4.0 * i * dt), 2.0);
        double v = 0.0;
        for (int h = 1; h <= 6; ++h) v += std::sin(h * phase) / h;
        y[i] = env * v;
      }
      break;
    }
    case 1: {  // ambulance: two-tone siren
      double phase = 0.0;
      for (size_t i = 0; i < n; ++i) {
        const double f = (static_cast<size_t>(i * dt * 2.0) % 2 == 0) ? 650.0 : 950.0;
        phase += 2.0 * M_PI * f * dt;
        y[i] = std::sin(phase) + 0.4 * std::sin(2.0 * phase) +
               0.05 * (2.0 * rng.Uniform() - 1.0);
      }
      break;
    }
    case 2: {  // crowd laughing: several voices with rapid bursts
      for (int voice = 0; voice < 5; ++voice) {
        const double f0 = rng.Uniform(160.0, 320.0);
        const double rate_hz = rng.Uniform(4.0, 7.0);
        const double start = rng.Uniform(0.0, 1.0);
        double phase = 0.0;
        for (size_t i = 0; i < n; ++i) {
          phase += 2.0 * M_PI * f0 * (1.0 + 0.05 * std::sin(2.0 * M_PI * 3.0 * i * dt)) * dt;
          const double env =
              std::max(0.0, std::sin(2.0 * M_PI * rate_hz * (i * dt + start)));
          y[i] += env * (std::sin(phase) + 0.5 * std::sin(2.0 * phase) +
                         0.3 * std::sin(3.0 * phase));
        }
      }
      break;
    }
    case 3: {  // football crowd: broadband roar with slow swell
      OnePole lp{PoleFor(1500.0, rate)};
      for (size_t i = 0; i < n; ++i)
        y[i] = (0.7 + 0.3 * std::sin(2.0 * M_PI * 0.4 * i * dt)) *
               lp(2.0 * rng.Uniform() - 1.0);
      break;
    }
    case 4: {  // mall: pinkish murmur plus faint music
      OnePole lp1{PoleFor(400.0, rate)}, lp2{PoleFor(2500.0, rate)};
      double phase = 0.0;
      const double notes[] = {261.6, 329.6, 392.0, 523.3};
      for (size_t i = 0; i < n; ++i) {
        const double w = 2.0 * rng.Uniform() - 1.0;
        phase += 2.0 * M_PI * notes[static_cast<size_t>(i * dt * 2.0) % 4] * dt;
        y[i] = 2.0 * lp1(w) + 0.5 * lp2(w) + 0.15 * std::sin(phase);
      }
      break;
    }
    case 5: {  // passing bus: low rumble rising and falling
      OnePole lp{PoleFor(250.0, rate)};
      const double total = n * dt;
      for (size_t i = 0; i < n; ++i) {
        const double t = i * dt / total;
        const double env = 0.2 + std::exp(-std::pow((t - 0.5) / 0.25, 2.0));
        y[i] = env * lp(2.0 * rng.Uniform() - 1.0);
      }
      break;
    }
    case 6: {  // rain: high-passed hiss with droplets
      OnePole lp{PoleFor(3000.0, rate)};
      for (size_t i = 0; i < n; ++i) {
        const double w = 2.0 * rng.Uniform() - 1.0;
        y[i] = w - lp(w);
        if (rng.Uniform() < 0.002) y[i] += rng.Uniform(-3.0, 3.0);
      }
      break;
    }
    case 7: {  // street traffic: engine hum, road noise, a horn
      OnePole lp{PoleFor(700.0, rate)};
      double phase = 0.0, horn = 0.0;
      for (size_t i = 0; i < n; ++i) {
        phase += 2.0 * M_PI * (60.0 + 15.0 * std::sin(2.0 * M_PI * 0.3 * i * dt)) * dt;
        horn += 2.0 * M_PI * 420.0 * dt;
        const double t = i * dt;
        const double horn_env = (t > 1.2 && t < 1.6) ? 0.6 : 0.0;
        y[i] = lp(2.0 * rng.Uniform() - 1.0) * 2.0 + 0.5 * std::sin(phase) +
               horn_env * (std::sin(horn) + 0.5 * std::sin(3.0 * horn));
      }
      break;
    }
    default: {  // tv: band-passed speech-like noise plus a tonal jingle
      OnePole lp_hi{PoleFor(2200.0, rate)}, lp_lo{PoleFor(500.0, rate)};
      double phase = 0.0;
      for (size_t i = 0; i < n; ++i) {
        const double w = 2.0 * rng.Uniform() - 1.0;
        const double band = lp_hi(w) - lp_lo(w);
        const double syll = 0.5 + 0.5 * std::sin(2.0 * M_PI * 3.5 * i * dt);
        phase += 2.0 * M_PI * 880.0 * dt;
        y[i] = 2.0 * syll * band + 0.2 * std::sin(phase);
      }
      break;
    }
  }
  return y;
}

}  // namespace

std::vector<SceneMix> SyntheticScenes(uint64_t seed, double seconds,
                                      int sample_rate) {
  const auto n = static_cast<size_t>(std::llround(seconds * sample_rate));
  std::vector<SceneMix> scenes;
  const auto &names = SceneNames();
  for (size_t k = 0; k < names.size(); ++k) {
    Rng rng(DeriveSeed(seed, "scene", names[k]));
    std::vector<double> y = RenderScene(k, n, sample_rate, rng);
    double peak = 0.0;
    for (double v : y) peak = std::max(peak, std::abs(v));
    if (peak > 0.0)
      for (double &v : y) v *= 0.8 / peak;
    SceneMix scene;
    scene.name = names[k];
    scene.clip.samples = std::move(y);
    scene.clip.sample_rate = sample_rate;
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

std::vector<SceneMix> LoadScenes(const std::string &dir, size_t min_samples) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw Error(ErrorCode::kIoFailure, "scene directory not found: " + dir);
  std::vector<SceneMix> scenes;
  for (const auto &name : SceneNames()) {
    const fs::path path = fs::path(dir) / (name + ".wav");
    if (!fs::exists(path)) continue;
    AudioClip clip = Resample(ReadWav(path.string()), kCanonicalSampleRate);
    clip.provenance.clear();
    if (clip.samples.empty())
      throw Error(ErrorCode::kEmptyScene, "scene file is empty: " + path.string());
    if (clip.samples.size() < min_samples)
      clip.samples = SceneSegment(clip.samples, min_samples, 0);
    scenes.push_back({name, std::move(clip), {}});
  }
  return scenes;
}

}  // namespace interj

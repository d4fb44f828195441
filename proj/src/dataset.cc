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

#include "interj/dataset.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "json.hpp"

#include "interj/dsp.h"
#include "interj/error.h"
#include "interj/parallel.h"
#include "interj/random.h"

namespace interj {

namespace fs = std::filesystem;

const std::array<std::string, kNumClasses> &ClassNames() {
  static const std::array<std::string, kNumClasses> names = {
      "nah", "mmm", "ahah", "oy", "negative"};
  return names;
}

std::optional<int> FindLabel(std::string_view name) {
  const auto &names = ClassNames();
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

int LabelIndex(std::string_view name) {
  auto idx = FindLabel(name);
  if (!idx) throw Error(ErrorCode::kUnknownLabel, "unknown class '" + std::string(name) + "'");
  return *idx;
}

std::string_view GateReasonName(GateReason reason) {
  switch (reason) {
    case GateReason::kAccepted: return "Accepted";
    case GateReason::kTooShort: return "TooShort";
    case GateReason::kTooLong: return "TooLong";
  }
  return "Unknown";
}

size_t SecondsToSamples(double seconds, int sample_rate) {
  return static_cast<size_t>(std::llround(seconds * sample_rate));
}

GateResult LengthGate(const AudioClip &clip, const LengthBounds &bounds) {
  const size_t n = clip.samples.size();
  if (n < SecondsToSamples(bounds.min_seconds, clip.sample_rate))
    return {GateReason::kTooShort};
  if (n > SecondsToSamples(bounds.max_seconds, clip.sample_rate))
    return {GateReason::kTooLong};
  return {GateReason::kAccepted};
}

size_t DrawLeadingSilence(size_t total_silence, uint64_t seed) {
  Rng rng(seed);
  return static_cast<size_t>(rng.UniformInt(total_silence));
}

AudioClip PadToCanonical(const AudioClip &clip, uint64_t seed,
                         const LengthBounds &bounds) {
  const size_t target = SecondsToSamples(bounds.canonical_seconds, clip.sample_rate);
  const size_t n = clip.samples.size();
  if (n > target)
    throw Error(ErrorCode::kClipTooLong,
                std::to_string(n) + " samples exceed canonical " + std::to_string(target));
  const size_t lead = DrawLeadingSilence(target - n, seed);
  std::vector<double> padded(target, 0.0);
  std::copy(clip.samples.begin(), clip.samples.end(),
            padded.begin() + static_cast<long>(lead));
  return DeriveClip(clip, std::move(padded), clip.sample_rate);
}

AudioClip FitToCanonical(const AudioClip &clip, uint64_t seed,
                         const LengthBounds &bounds) {
  const size_t target = SecondsToSamples(bounds.canonical_seconds, clip.sample_rate);
  const size_t n = clip.samples.size();
  if (n <= target) return PadToCanonical(clip, seed, bounds);
  constexpr double kActivity = 1e-4;
  size_t first = n, last = 0;
  for (size_t i = 0; i < n; ++i) {
    if (std::abs(clip.samples[i]) > kActivity) {
      first = std::min(first, i);
      last = i;
    }
  }
  size_t start;
  if (first == n) {
    start = (n - target) / 2;
  } else if (last - first + 1 >= target) {
    start = first + (last - first + 1 - target) / 2;
  } else {
    // Any start in [lo, hi] keeps the whole active region.
    const size_t lo = last + 1 > target ? last + 1 - target : 0;
    const size_t hi = std::min(first, n - target);
    start = lo + static_cast<size_t>(Rng(seed).UniformInt(hi - lo));
  }
  std::vector<double> cropped(clip.samples.begin() + static_cast<long>(start),
                              clip.samples.begin() + static_cast<long>(start + target));
  return DeriveClip(clip, std::move(cropped), clip.sample_rate);
}

void WriteManifest(const Manifest &manifest, const std::string &path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot create " + path);
  for (const auto &row : manifest) {
    nlohmann::ordered_json j;
    j["path"] = row.path;
    j["label"] = row.label;
    j["speaker"] = row.speaker;
    j["duration_s"] = row.duration_s;
    j["provenance"] = row.provenance;
    out << j.dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path);
}

Manifest ReadManifest(const std::string &path, bool check_paths) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open manifest " + path);
  Manifest manifest;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ManifestRow row;
    try {
      const auto j = nlohmann::json::parse(line);
      row.path = j.at("path").get<std::string>();
      row.label = j.at("label").get<std::string>();
      row.speaker = j.at("speaker").get<std::string>();
      row.duration_s = j.at("duration_s").get<double>();
      row.provenance = j.value("provenance", std::string("clean"));
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kCorruptHeader,
                  path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    LabelIndex(row.label);
    if (check_paths && !fs::exists(row.path))
      throw Error(ErrorCode::kIoFailure, "manifest entry missing on disk: " + row.path);
    manifest.push_back(std::move(row));
  }
  return manifest;
}

namespace {

template <typename Row>
Split<Row> SplitRows(const std::vector<Row> &rows, const SplitSpec &spec,
                     std::string (*speaker_of)(const Row &)) {
  std::map<std::string, int> assignment;
  const std::vector<std::string> *sets[] = {&spec.train_speakers,
                                            &spec.validation_speakers,
                                            &spec.test_speakers};
  for (int s = 0; s < 3; ++s) {
    for (const auto &spk : *sets[s]) {
      auto [it, inserted] = assignment.emplace(spk, s);
      if (!inserted)
        throw Error(ErrorCode::kOverlappingSplit, "speaker '" + spk + "' listed twice");
    }
  }
  std::map<std::string, size_t> seen;
  Split<Row> out;
  for (const auto &row : rows) {
    const std::string spk = speaker_of(row);
    ++seen[spk];
    auto it = assignment.find(spk);
    if (it == assignment.end()) {
      out.unassigned.push_back(row);
      continue;
    }
    (it->second == 0 ? out.train : it->second == 1 ? out.validation : out.test)
        .push_back(row);
  }
  for (const auto &[spk, set] : assignment)
    if (!seen.count(spk))
      throw Error(ErrorCode::kUnknownSpeaker, "speaker '" + spk + "' has no rows");
  return out;
}

std::string RowSpeaker(const ManifestRow &row) { return row.speaker; }
std::string ClipSpeaker(const AudioClip &clip) { return clip.speaker.value_or(""); }

}  // namespace

Split<ManifestRow> SplitBySpeaker(const Manifest &manifest, const SplitSpec &spec) {
  return SplitRows(manifest, spec, &RowSpeaker);
}

Split<AudioClip> SplitBySpeaker(const std::vector<AudioClip> &clips,
                                const SplitSpec &spec) {
  return SplitRows(clips, spec, &ClipSpeaker);
}

std::string SyntheticSpeakerId(size_t index) { return "spk" + std::to_string(index); }

SpeakerTraits SyntheticSpeaker(size_t index, size_t speakers) {
  if (speakers <= 1) return {};
  const double span = static_cast<double>(speakers - 1);
  SpeakerTraits t;
  t.pitch_semitones = -1.5 + 3.0 * static_cast<double>(index) / span;
  // Tempo is spread with a stride so it does not track pitch.
  const size_t stride = speakers % 3 == 0 ? 2 : 3;
  t.tempo = 0.92 + 0.16 * static_cast<double>((index * stride) % speakers) / span;
  return t;
}

namespace {

struct Formant {
  double hz, bandwidth, gain;
};

class SineTable {
 public:
  SineTable() : table_(kSize + 1) {
    for (size_t i = 0; i <= kSize; ++i) table_[i] = std::sin(2.0 * M_PI * i / kSize);
  }
  // Sine of phase measured in cycles.
  double operator()(double cycles) const {
    const double pos = (cycles - std::floor(cycles)) * kSize;
    const auto i = static_cast<size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return table_[i] + frac * (table_[i + 1] - table_[i]);
  }

 private:
  static constexpr size_t kSize = 4096;
  std::vector<double> table_;
};

const SineTable &Sines() {
  static const SineTable table;
  return table;
}

// Source-filter voice: harmonics of a time-varying f0 weighted by formant
// resonances and a spectral tilt, plus optional breath noise.
struct VoiceState {
  double f0 = 140.0;
  std::vector<Formant> formants;
  double tilt = 1.0;   // harmonic amplitude ~ 1 / h^tilt
  double voiced = 1.0;
  double breath = 0.0;  // aspiration noise level
};

constexpr size_t kBlock = 64;
constexpr double kMaxHarmonicHz = 4000.0;

std::vector<double> RenderVoice(size_t n, int rate, Rng &rng,
                                const std::function<VoiceState(double)> &at) {
  std::vector<double> y(n, 0.0);
  const SineTable &sines = Sines();
  double phase = 0.0;  // fundamental phase in cycles
  std::vector<double> amps;
  double noise_lp = 0.0, noise_hp_state = 0.0;
  for (size_t start = 0; start < n; start += kBlock) {
    const VoiceState v = at(static_cast<double>(start) / static_cast<double>(n));
    const auto harmonics = static_cast<size_t>(kMaxHarmonicHz / v.f0);
    amps.assign(harmonics, 0.0);
    for (size_t h = 1; h <= harmonics; ++h) {
      const double f = h * v.f0;
      double g = 0.0;
      for (const auto &fm : v.formants) {
        const double d = (f - fm.hz) / fm.bandwidth;
        g += fm.gain / (1.0 + d * d);
      }
      amps[h - 1] = v.voiced * g / std::pow(static_cast<double>(h), v.tilt);
    }
    const size_t end = std::min(n, start + kBlock);
    for (size_t i = start; i < end; ++i) {
      phase += v.f0 / rate;
      double s = 0.0;
      for (size_t h = 0; h < harmonics; ++h) s += amps[h] * sines(phase * (h + 1));
      if (v.breath > 0.0) {
        const double w = 2.0 * rng.Uniform() - 1.0;
        noise_lp += 0.55 * (w - noise_lp);
        noise_hp_state += 0.08 * (noise_lp - noise_hp_state);
        s += v.breath * (noise_lp - noise_hp_state);
      }
      y[i] = s;
    }
  }
  return y;
}

double Lerp(double a, double b, double t) { return a + (b - a) * t; }

std::vector<Formant> Vowel(double f1, double f2, double f3, double scale) {
  return {{f1 * scale, 90.0, 1.0}, {f2 * scale, 110.0, 0.6}, {f3 * scale, 160.0, 0.25}};
}

// Smooth on/off envelope over [0, 1] with the given ramp fraction.
double Envelope(double t, double ramp) {
  if (t < 0.0 || t > 1.0) return 0.0;
  const double a = std::min(1.0, t / ramp), r = std::min(1.0, (1.0 - t) / ramp);
  const double e = std::min(a, r);
  return 0.5 - 0.5 * std::cos(M_PI * e);
}

std::vector<double> RenderGesture(int label, size_t n, int rate, double base_f0,
                                  double formant_scale, Rng &rng) {
  const double jitter = rng.Uniform(0.96, 1.04);
  const double f0 = base_f0 * jitter;
  const double fs = formant_scale * rng.Uniform(0.96, 1.04);
  std::vector<double> envelope(n, 1.0);
  std::vector<double> y;
  switch (label) {
    case 0: {  // nah: nasal onset into an open vowel, falling pitch
      y = RenderVoice(n, rate, rng, [&](double t) {
        VoiceState v;
        v.f0 = f0 * (1.3 - 0.5 * t);
        v.formants = t < 0.15 ? Vowel(260, 1000, 2200, fs) : Vowel(760, 1250, 2600, fs);
        if (t < 0.15) v.tilt = 1.8;
        return v;
      });
      for (size_t i = 0; i < n; ++i) envelope[i] = Envelope(double(i) / n, 0.08);
      break;
    }
    case 1: {  // mmm: steady closed-mouth hum
      y = RenderVoice(n, rate, rng, [&](double t) {
        VoiceState v;
        v.f0 = f0 * 0.9 * (1.0 + 0.02 * std::sin(2.0 * M_PI * 3.0 * t));
        v.formants = {{250 * fs, 70.0, 1.0}, {1100 * fs, 150.0, 0.08}};
        v.tilt = 2.0;
        return v;
      });
      for (size_t i = 0; i < n; ++i) envelope[i] = Envelope(double(i) / n, 0.15);
      break;
    }
    case 2: {  // ahah: two breathy bursts, each rising
      y = RenderVoice(n, rate, rng, [&](double t) {
        VoiceState v;
        const double local = t < 0.45 ? t / 0.45 : (t - 0.55) / 0.45;
        v.f0 = f0 * (1.0 + 0.35 * std::clamp(local, 0.0, 1.0));
        v.formants = Vowel(700, 1150, 2500, fs);
        v.breath = local < 0.2 ? 0.6 : 0.15;
        return v;
      });
      for (size_t i = 0; i < n; ++i) {
        const double t = double(i) / n;
        envelope[i] = t < 0.45 ? Envelope(t / 0.45, 0.15)
                               : Envelope((t - 0.55) / 0.45, 0.15);
      }
      break;
    }
    case 3: {  // oy: rise-fall with an /o/ to /i/ glide
      y = RenderVoice(n, rate, rng, [&](double t) {
        VoiceState v;
        v.f0 = f0 * (1.0 + 0.45 * std::sin(M_PI * t));
        v.formants = Vowel(Lerp(450, 300, t), Lerp(800, 2200, t), Lerp(2400, 3000, t), fs);
        return v;
      });
      for (size_t i = 0; i < n; ++i) envelope[i] = Envelope(double(i) / n, 0.1);
      break;
    }
    default: {  // negative: a short word of random vowels
      const int segments = 2 + static_cast<int>(rng.UniformInt(1));
      std::vector<std::vector<Formant>> vowels;
      std::vector<double> pitches;
      for (int s = 0; s < segments; ++s) {
        vowels.push_back(Vowel(rng.Uniform(300, 850), rng.Uniform(900, 2400),
                               rng.Uniform(2400, 3200), fs));
        pitches.push_back(f0 * rng.Uniform(0.9, 1.2));
      }
      y = RenderVoice(n, rate, rng, [&](double t) {
        const auto s = std::min<size_t>(static_cast<size_t>(t * segments), segments - 1);
        VoiceState v;
        v.f0 = pitches[s];
        v.formants = vowels[s];
        const double within = t * segments - static_cast<double>(s);
        v.breath = within < 0.12 ? 0.5 : 0.0;
        v.voiced = within < 0.08 ? 0.2 : 1.0;
        return v;
      });
      for (size_t i = 0; i < n; ++i) envelope[i] = Envelope(double(i) / n, 0.06);
      break;
    }
  }
  double peak = 0.0;
  for (size_t i = 0; i < n; ++i) {
    y[i] *= envelope[i];
    peak = std::max(peak, std::abs(y[i]));
  }
  const double level = rng.Uniform(0.3, 0.7);
  if (peak > 0.0)
    for (double &v : y) v *= level / peak;
  return y;
}

}  // namespace

std::vector<AudioClip> SynthCorpus(const SynthSpec &spec) {
  constexpr double kBaseF0 = 140.0;
  const int rate = kCanonicalSampleRate;
  std::vector<AudioClip> clips;
  for (size_t s = 0; s < spec.speakers; ++s) {
    const SpeakerTraits traits = SyntheticSpeaker(s, spec.speakers);
    const std::string speaker = SyntheticSpeakerId(s);
    const double pitch_ratio = std::pow(2.0, traits.pitch_semitones / 12.0);
    // Vocal tract length tracks voice pitch loosely.
    const double formant_scale = std::pow(2.0, traits.pitch_semitones / 24.0);
    for (size_t c = 0; c < kNumClasses; ++c) {
      for (size_t i = 0; i < spec.per_class[c]; ++i) {
        char id[96];
        std::snprintf(id, sizeof id, "%s/%s/%zu", speaker.c_str(),
                      ClassNames()[c].c_str(), i);
        Rng rng(DeriveSeed(spec.seed, "synth", id));
        const double duration = std::clamp(rng.Uniform(0.5, 1.4) / traits.tempo,
                                           spec.bounds.min_seconds + 0.01,
                                           spec.bounds.max_seconds - 0.01);
        const size_t n = SecondsToSamples(duration, rate);
        AudioClip raw;
        raw.sample_rate = rate;
        raw.label = ClassNames()[c];
        raw.speaker = speaker;
        raw.samples = RenderGesture(static_cast<int>(c), n, rate, kBaseF0 * pitch_ratio,
                                    formant_scale, rng);
        if (!LengthGate(raw, spec.bounds).accepted())
          throw Error(ErrorCode::kLengthMismatch, "synthetic clip failed the gate");
        clips.push_back(PadToCanonical(raw, DeriveSeed(spec.seed, "pad", id), spec.bounds));
      }
    }
  }
  return clips;
}

Manifest WriteCorpus(const std::vector<AudioClip> &clips, const std::string &root) {
  Manifest manifest;
  std::map<std::string, size_t> counters;
  for (const auto &clip : clips) {
    const std::string label = clip.label.value_or("");
    LabelIndex(label);
    const std::string speaker = clip.speaker.value_or("unknown");
    const fs::path dir = fs::path(root) / label;
    fs::create_directories(dir);
    char name[128];
    std::snprintf(name, sizeof name, "%s_%04zu.wav", speaker.c_str(),
                  counters[speaker + "/" + label]++);
    const std::string path = (dir / name).string();
    WriteWav(clip, path);
    manifest.push_back({path, label, speaker, clip.duration_seconds(),
                        clip.provenance_string()});
  }
  return manifest;
}

std::vector<AudioClip> LoadCorpus(const Manifest &manifest) {
  std::vector<AudioClip> clips;
  clips.reserve(manifest.size());
  for (const auto &row : manifest) {
    AudioClip clip = ReadWav(row.path);
    if (clip.sample_rate != kCanonicalSampleRate) {
      clip = Resample(clip, kCanonicalSampleRate);
      clip.provenance.clear();
    }
    clip.label = row.label;
    clip.speaker = row.speaker;
    if (row.provenance != "clean") {
      size_t start = 0;
      while (start <= row.provenance.size()) {
        const size_t plus = row.provenance.find('+', start);
        clip.provenance.push_back(row.provenance.substr(start, plus - start));
        if (plus == std::string::npos) break;
        start = plus + 1;
      }
    }
    clips.push_back(std::move(clip));
  }
  return clips;
}

Manifest IngestTree(const std::string &root, const std::string &out_root,
                    uint64_t seed, const LengthBounds &bounds, IngestStats *stats,
                    int jobs) {
  if (!fs::is_directory(root))
    throw Error(ErrorCode::kIoFailure, "corpus root not found: " + root);
  struct Item {
    std::string label, stem;
    fs::path source;
  };
  std::vector<Item> items;
  for (const auto &label : ClassNames()) {
    const fs::path dir = fs::path(root) / label;
    if (!fs::is_directory(dir)) continue;
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".wav")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (auto &f : files) items.push_back({label, f.stem().string(), f});
  }

  for (const auto &label : ClassNames()) fs::create_directories(fs::path(out_root) / label);
  std::vector<GateReason> reasons(items.size());
  std::vector<ManifestRow> rows(items.size());
  ParallelFor(items.size(), jobs, [&](size_t i) {
    const Item &item = items[i];
    AudioClip clip = Resample(ReadWav(item.source.string()), kCanonicalSampleRate);
    clip.provenance.clear();
    reasons[i] = LengthGate(clip, bounds).reason;
    if (reasons[i] != GateReason::kAccepted) return;
    const size_t us = item.stem.find('_');
    clip.label = item.label;
    clip.speaker = us == std::string::npos ? "unknown" : item.stem.substr(0, us);
    const std::string id = item.label + "/" + item.stem;
    AudioClip padded = PadToCanonical(clip, DeriveSeed(seed, "pad", id), bounds);
    const fs::path dir = fs::path(out_root) / item.label;
    const std::string path = (dir / (item.stem + ".wav")).string();
    WriteWav(padded, path);
    rows[i] = {path, item.label, *clip.speaker, padded.duration_seconds(), "clean"};
  });

  IngestStats local;
  Manifest manifest;
  for (size_t i = 0; i < items.size(); ++i) {
    switch (reasons[i]) {
      case GateReason::kAccepted:
        ++local.accepted;
        manifest.push_back(rows[i]);
        break;
      case GateReason::kTooShort: ++local.too_short; break;
      case GateReason::kTooLong: ++local.too_long; break;
    }
  }
  if (stats) *stats = local;
  return manifest;
}

}  // namespace interj

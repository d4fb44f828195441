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

#ifndef INTERJ_DATASET_H_
#define INTERJ_DATASET_H_

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "interj/audio_io.h"

namespace interj {

constexpr size_t kNumClasses = 5;

// Class names in label-index order.
const std::array<std::string, kNumClasses> &ClassNames();
// Index of a class name. Throws kUnknownLabel.
int LabelIndex(std::string_view name);
std::optional<int> FindLabel(std::string_view name);

struct LengthBounds {
  double min_seconds = 0.45;
  double max_seconds = 1.55;
  double canonical_seconds = 1.55;
};

enum class GateReason { kAccepted, kTooShort, kTooLong };

struct GateResult {
  GateReason reason = GateReason::kAccepted;
  bool accepted() const { return reason == GateReason::kAccepted; }
};

std::string_view GateReasonName(GateReason reason);

size_t SecondsToSamples(double seconds, int sample_rate);

// Accepts clips whose length lies in [min, max] seconds, both inclusive.
GateResult LengthGate(const AudioClip &clip, const LengthBounds &bounds = {});

// Leading-silence length in samples, uniform over [0, total_silence].
size_t DrawLeadingSilence(size_t total_silence, uint64_t seed);

// Surrounds the clip with silence up to the canonical length, placing a
// random share of it in front. Throws kClipTooLong.
AudioClip PadToCanonical(const AudioClip &clip, uint64_t seed,
                         const LengthBounds &bounds = {});

// Brings an augmented clip back to canonical length: shorter clips are
// padded as above; longer ones are cropped to a window that keeps as much of
// the non-silent region as fits, positioned at random.
AudioClip FitToCanonical(const AudioClip &clip, uint64_t seed,
                         const LengthBounds &bounds = {});

struct ManifestRow {
  std::string path;
  std::string label;
  std::string speaker;
  double duration_s = 0.0;
  std::string provenance = "clean";
};

using Manifest = std::vector<ManifestRow>;

// JSON Lines, one object per row: path, label, speaker, duration_s, provenance.
void WriteManifest(const Manifest &manifest, const std::string &path);
// Rows are validated: label in the class set, path present unless
// check_paths is false.
Manifest ReadManifest(const std::string &path, bool check_paths = true);

struct SplitSpec {
  std::vector<std::string> train_speakers;
  std::vector<std::string> validation_speakers;
  std::vector<std::string> test_speakers;
};

template <typename Row>
struct Split {
  std::vector<Row> train, validation, test;
  // Rows whose speaker is in none of the three sets.
  std::vector<Row> unassigned;
};

// Throws kOverlappingSplit when a speaker appears in two sets and
// kUnknownSpeaker when a listed speaker has no rows.
Split<ManifestRow> SplitBySpeaker(const Manifest &manifest, const SplitSpec &spec);
Split<AudioClip> SplitBySpeaker(const std::vector<AudioClip> &clips,
                                const SplitSpec &spec);

struct SynthSpec {
  std::array<size_t, kNumClasses> per_class{120, 120, 120, 120, 120};
  size_t speakers = 5;
  uint64_t seed = 1;
  LengthBounds bounds;
};

struct SpeakerTraits {
  double pitch_semitones = 0.0;
  double tempo = 1.0;
};

std::string SyntheticSpeakerId(size_t index);
// Speakers are spread evenly over +-1.5 semitones and +-8% tempo.
SpeakerTraits SyntheticSpeaker(size_t index, size_t speakers);

// Deterministic corpus of class-distinct tonal gestures, gated and padded to
// canonical length. Ordered by speaker, then class, then index.
std::vector<AudioClip> SynthCorpus(const SynthSpec &spec);

// Writes clips under <root>/<label>/<speaker>_<nnnn>.wav and returns the
// manifest (paths as written).
Manifest WriteCorpus(const std::vector<AudioClip> &clips, const std::string &root);
std::vector<AudioClip> LoadCorpus(const Manifest &manifest);

struct IngestStats {
  size_t accepted = 0;
  size_t too_short = 0;
  size_t too_long = 0;
};

// Reads <root>/<label>/<file>.wav, resamples to 16 kHz, gates and pads each
// clip, writes it to <out_root>/<label>/<file>.wav and returns the manifest.
// The speaker is the file stem up to the first '_' ("unknown" without one).
Manifest IngestTree(const std::string &root, const std::string &out_root,
                    uint64_t seed, const LengthBounds &bounds, IngestStats *stats,
                    int jobs = 1);

}  // namespace interj

#endif  // INTERJ_DATASET_H_

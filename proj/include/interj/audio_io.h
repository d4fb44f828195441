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

#ifndef INTERJ_AUDIO_IO_H_
#define INTERJ_AUDIO_IO_H_

#include <optional>
#include <string>
#include <vector>

namespace interj {

constexpr int kCanonicalSampleRate = 16000;

// Mono audio held as normalized real amplitudes in [-1, 1].
struct AudioClip {
  std::vector<double> samples;
  int sample_rate = kCanonicalSampleRate;
  std::optional<std::string> label;
  std::optional<std::string> speaker;
  // Applied effects, oldest first. Empty means the clip is clean.
  std::vector<std::string> provenance;

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  // Provenance joined with '+', or "clean".
  std::string provenance_string() const;
};

// Copies label, speaker and provenance from `from`, replacing the samples.
AudioClip DeriveClip(const AudioClip &from, std::vector<double> samples,
                     int sample_rate);

// Decodes a RIFF/WAVE file holding mono 16-bit PCM or 32-bit float audio.
// Throws Error(kUnsupportedFormat | kCorruptHeader | kIoFailure).
AudioClip ReadWav(const std::string &path);

// Writes mono 16-bit PCM. Samples are clamped to [-1, 1] before quantizing.
void WriteWav(const AudioClip &clip, const std::string &path);

// In-memory forms of the above, used by ReadWav/WriteWav.
AudioClip DecodeWav(const std::string &bytes);
std::string EncodeWav(const AudioClip &clip);

int16_t QuantizePcm16(double amplitude);

}  // namespace interj

#endif  // INTERJ_AUDIO_IO_H_

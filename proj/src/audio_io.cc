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

#include "interj/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "interj/error.h"

namespace interj {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;

uint32_t ReadU32(const std::string &b, size_t pos) {
  return static_cast<uint32_t>(static_cast<uint8_t>(b[pos])) |
         static_cast<uint32_t>(static_cast<uint8_t>(b[pos + 1])) << 8 |
         static_cast<uint32_t>(static_cast<uint8_t>(b[pos + 2])) << 16 |
         static_cast<uint32_t>(static_cast<uint8_t>(b[pos + 3])) << 24;
}

uint16_t ReadU16(const std::string &b, size_t pos) {
  return static_cast<uint16_t>(static_cast<uint8_t>(b[pos]) |
                               static_cast<uint8_t>(b[pos + 1]) << 8);
}

void PutU32(std::string *b, uint32_t v) {
  for (int i = 0; i < 4; ++i) b->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string *b, uint16_t v) {
  b->push_back(static_cast<char>(v & 0xff));
  b->push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

std::string AudioClip::provenance_string() const {
  if (provenance.empty()) return "clean";
  std::string out;
  for (size_t i = 0; i < provenance.size(); ++i) {
    if (i) out += '+';
    out += provenance[i];
  }
  return out;
}

AudioClip DeriveClip(const AudioClip &from, std::vector<double> samples,
                     int sample_rate) {
  AudioClip out;
  out.samples = std::move(samples);
  out.sample_rate = sample_rate;
  out.label = from.label;
  out.speaker = from.speaker;
  out.provenance = from.provenance;
  return out;
}

int16_t QuantizePcm16(double amplitude) {
  if (!std::isfinite(amplitude)) amplitude = 0.0;
  const double clamped = std::clamp(amplitude, -1.0, 1.0);
  const double scaled = std::round(clamped * 32768.0);
  return static_cast<int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

AudioClip DecodeWav(const std::string &b) {
  if (b.size() < 12 || b.compare(0, 4, "RIFF") != 0 ||
      b.compare(8, 4, "WAVE") != 0)
    throw Error(ErrorCode::kCorruptHeader, "missing RIFF/WAVE signature");

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t data_pos = 0, data_len = 0;
  bool have_data = false;

  size_t pos = 12;
  while (pos + 8 <= b.size()) {
    const std::string id = b.substr(pos, 4);
    const uint32_t len = ReadU32(b, pos + 4);
    const size_t body = pos + 8;
    if (id == "fmt ") {
      if (len < 16 || body + 16 > b.size())
        throw Error(ErrorCode::kCorruptHeader, "fmt chunk too short");
      format = ReadU16(b, body);
      channels = ReadU16(b, body + 2);
      rate = ReadU32(b, body + 4);
      bits = ReadU16(b, body + 14);
      have_fmt = true;
    } else if (id == "data") {
      if (body + len > b.size())
        throw Error(ErrorCode::kCorruptHeader, "data chunk exceeds file size");
      data_pos = body;
      data_len = len;
      have_data = true;
      break;
    }
    pos = body + len + (len & 1);
  }
  if (!have_fmt) throw Error(ErrorCode::kCorruptHeader, "no fmt chunk");
  if (!have_data) throw Error(ErrorCode::kCorruptHeader, "no data chunk");
  if (channels != 1)
    throw Error(ErrorCode::kUnsupportedFormat,
                "expected 1 channel, got " + std::to_string(channels));
  if (rate == 0) throw Error(ErrorCode::kCorruptHeader, "sample rate is 0");

  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  if (format == kFormatPcm && bits == 16) {
    const size_t n = data_len / 2;
    clip.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
      const auto v = static_cast<int16_t>(ReadU16(b, data_pos + 2 * i));
      clip.samples[i] = v / 32768.0;
    }
  } else if (format == kFormatFloat && bits == 32) {
    const size_t n = data_len / 4;
    clip.samples.resize(n);
    for (size_t i = 0; i < n; ++i) {
      const uint32_t raw = ReadU32(b, data_pos + 4 * i);
      float f;
      std::memcpy(&f, &raw, sizeof f);
      if (!std::isfinite(f))
        throw Error(ErrorCode::kCorruptHeader, "non-finite float sample");
      clip.samples[i] = std::clamp(static_cast<double>(f), -1.0, 1.0);
    }
  } else {
    throw Error(ErrorCode::kUnsupportedFormat,
                "format tag " + std::to_string(format) + " with " +
                    std::to_string(bits) + " bits per sample");
  }
  return clip;
}

std::string EncodeWav(const AudioClip &clip) {
  const auto n = static_cast<uint32_t>(clip.samples.size());
  const uint32_t data_len = 2 * n;
  std::string b;
  b.reserve(44 + data_len);
  b += "RIFF";
  PutU32(&b, 36 + data_len);
  b += "WAVE";
  b += "fmt ";
  PutU32(&b, 16);
  PutU16(&b, kFormatPcm);
  PutU16(&b, 1);
  PutU32(&b, static_cast<uint32_t>(clip.sample_rate));
  PutU32(&b, static_cast<uint32_t>(clip.sample_rate) * 2);
  PutU16(&b, 2);
  PutU16(&b, 16);
  b += "data";
  PutU32(&b, data_len);
  for (double s : clip.samples)
    PutU16(&b, static_cast<uint16_t>(QuantizePcm16(s)));
  return b;
}

AudioClip ReadWav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read failed: " + path);
  return DecodeWav(bytes);
}

void WriteWav(const AudioClip &clip, const std::string &path) {
  const std::string bytes = EncodeWav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot create " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path);
}

}  // namespace interj

/* Copyright 2026 The ssdscreen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "ssd/audio/audio_clip.hpp"
#include "ssd/core/error.hpp"

namespace ssd::audio {

static_assert(std::endian::native == std::endian::little, "WAV codec assumes a little-endian host");

namespace wav_detail {

inline constexpr std::uint16_t kFormatPcm = 1;
inline constexpr std::uint16_t kFormatFloat = 3;
inline constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T read_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
  if (offset + sizeof(T) > bytes.size()) fail(ErrorKind::Decode, "truncated header");
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

template <typename T>
void write_le(std::vector<std::uint8_t>& out, T value) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

inline void write_tag(std::vector<std::uint8_t>& out, const char (&tag)[5]) { out.insert(out.end(), tag, tag + 4); }

inline bool tag_is(std::span<const std::uint8_t> bytes, std::size_t offset, const char (&tag)[5]) {
  return offset + 4 <= bytes.size() && std::memcmp(bytes.data() + offset, tag, 4) == 0;
}

inline double decode_sample(const std::uint8_t* p, std::uint16_t format, int bits) {
  if (format == kFormatFloat) {
    float f;
    std::memcpy(&f, p, 4);
    if (!std::isfinite(f)) fail(ErrorKind::Decode, "non-finite float sample");
    return std::clamp(static_cast<double>(f), -1.0, 1.0);
  }
  switch (bits) {
    case 8: return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16: {
      std::int16_t v;
      std::memcpy(&v, p, 2);
      return v / 32768.0;
    }
    case 24: {
      std::int32_t v = static_cast<std::int32_t>(static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                                                 (static_cast<std::uint32_t>(p[2]) << 16) |
                                                 (static_cast<std::uint32_t>(p[2] & 0x80 ? 0xFF : 0) << 24));
      return v / 8388608.0;
    }
    case 32: {
      std::int32_t v;
      std::memcpy(&v, p, 4);
      return v / 2147483648.0;
    }
  }
  fail(ErrorKind::UnsupportedFormat, "unsupported bit depth " + std::to_string(bits));
}

}  // namespace wav_detail

/// Decodes RIFF/WAVE bytes into a mono clip. Integer PCM is scaled by full
/// scale (2^(bits-1)); stereo is averaged.
inline AudioClip decode_wav(std::span<const std::uint8_t> bytes) {
  using namespace wav_detail;
  if (!tag_is(bytes, 0, "RIFF") || !tag_is(bytes, 8, "WAVE")) fail(ErrorKind::Decode, "missing RIFF/WAVE header");

  std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t offset = 12;
  while (offset + 8 <= bytes.size()) {
    const auto size = read_le<std::uint32_t>(bytes, offset + 4);
    const std::size_t body = offset + 8;
    if (tag_is(bytes, offset, "fmt ")) {
      if (size < 16 || body + size > bytes.size()) fail(ErrorKind::Decode, "fmt chunk truncated");
      format = read_le<std::uint16_t>(bytes, body);
      channels = read_le<std::uint16_t>(bytes, body + 2);
      rate = read_le<std::uint32_t>(bytes, body + 4);
      block_align = read_le<std::uint16_t>(bytes, body + 12);
      bits = read_le<std::uint16_t>(bytes, body + 14);
      if (format == kFormatExtensible) {
        if (size < 26) fail(ErrorKind::Decode, "extensible fmt chunk truncated");
        format = read_le<std::uint16_t>(bytes, body + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (tag_is(bytes, offset, "data")) {
      // Some writers leave the data size unset when streaming; clamp to what exists.
      const std::size_t available = bytes.size() - body;
      data = bytes.subspan(body, std::min<std::size_t>(size, available));
      have_data = true;
      break;
    }
    offset = body + size + (size & 1u);
  }
  if (!have_fmt) fail(ErrorKind::Decode, "no fmt chunk");
  if (!have_data) fail(ErrorKind::Decode, "no data chunk");
  if (format != kFormatPcm && format != kFormatFloat) {
    fail(ErrorKind::UnsupportedFormat, "codec tag " + std::to_string(format) + " is not PCM or IEEE float");
  }
  if (channels < 1 || channels > 2) fail(ErrorKind::UnsupportedFormat, std::to_string(channels) + " channels");
  if (rate == 0) fail(ErrorKind::Decode, "zero sample rate");
  const bool int_ok = format == kFormatPcm && (bits == 8 || bits == 16 || bits == 24 || bits == 32);
  const bool float_ok = format == kFormatFloat && bits == 32;
  if (!int_ok && !float_ok) fail(ErrorKind::UnsupportedFormat, std::to_string(bits) + "-bit samples");
  const std::size_t frame_bytes = static_cast<std::size_t>(channels) * (bits / 8);
  if (block_align != frame_bytes) fail(ErrorKind::Decode, "block alignment disagrees with format");

  const std::size_t frames = data.size() / frame_bytes;
  if (frames == 0) fail(ErrorKind::EmptyAudio, "data chunk holds no samples");

  std::vector<double> mono(frames);
  const std::size_t sample_bytes = bits / 8;
  for (std::size_t i = 0; i < frames; ++i) {
    const std::uint8_t* frame = data.data() + i * frame_bytes;
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) acc += decode_sample(frame + c * sample_bytes, format, bits);
    mono[i] = acc / channels;
  }
  return AudioClip(std::move(mono), static_cast<int>(rate), bits);
}

/// Encodes as mono integer PCM. 32-bit output is integer, not float: a
/// float32 mantissa cannot hold the 2^-31 round-trip bound.
inline std::vector<std::uint8_t> encode_wav(const AudioClip& clip, int bit_depth) {
  using namespace wav_detail;
  require(bit_depth == 16 || bit_depth == 32, ErrorKind::Parameter, "bit depth must be 16 or 32");
  require(!clip.empty(), ErrorKind::Precondition, "cannot encode an empty clip");

  const std::uint32_t sample_bytes = static_cast<std::uint32_t>(bit_depth / 8);
  const auto data_bytes = static_cast<std::uint32_t>(clip.size() * sample_bytes);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  write_tag(out, "RIFF");
  write_le<std::uint32_t>(out, 36 + data_bytes);
  write_tag(out, "WAVE");
  write_tag(out, "fmt ");
  write_le<std::uint32_t>(out, 16);
  write_le<std::uint16_t>(out, kFormatPcm);
  write_le<std::uint16_t>(out, 1);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(clip.sample_rate_hz()));
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(clip.sample_rate_hz()) * sample_bytes);
  write_le<std::uint16_t>(out, static_cast<std::uint16_t>(sample_bytes));
  write_le<std::uint16_t>(out, static_cast<std::uint16_t>(bit_depth));
  write_tag(out, "data");
  write_le<std::uint32_t>(out, data_bytes);

  const double full_scale = std::ldexp(1.0, bit_depth - 1);
  const auto lo = -full_scale, hi = full_scale - 1.0;
  for (double s : clip.samples()) {
    const double q = std::clamp(std::nearbyint(s * full_scale), lo, hi);
    if (bit_depth == 16) {
      write_le<std::int16_t>(out, static_cast<std::int16_t>(q));
    } else {
      write_le<std::int32_t>(out, static_cast<std::int32_t>(q));
    }
  }
  return out;
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline AudioClip load_wav(const std::filesystem::path& path) { return decode_wav(read_file_bytes(path)); }

inline void save_wav(const AudioClip& clip, const std::filesystem::path& path, int bit_depth) {
  const auto bytes = encode_wav(clip, bit_depth);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "short write to " + path.string());
}

}  // namespace ssd::audio

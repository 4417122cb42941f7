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

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "ssd/audio/wav.hpp"
#include "ssd/features/feature_map.hpp"

namespace ssd::features {

// SSDF container, little-endian:
//   char[4] "SSDF" | u16 version | u16 n_mels | u16 frames | u16 channels | f32 floor_db
//   followed by n_mels * frames * channels f32 values, row-major.
inline constexpr std::uint16_t kSsdfVersion = 1;
inline constexpr std::size_t kSsdfHeaderBytes = 16;

inline std::vector<std::uint8_t> encode_ssdf(const FeatureMap& map) {
  require(map.values.size() == static_cast<std::size_t>(map.n_mels) * map.frames * map.channels, ErrorKind::Shape,
          "feature map value count disagrees with its shape");
  require(map.n_mels <= 0xFFFF && map.frames <= 0xFFFF && map.channels <= 0xFFFF, ErrorKind::Shape,
          "feature map dimension exceeds u16");
  std::vector<std::uint8_t> out;
  out.reserve(kSsdfHeaderBytes + map.values.size() * 4);
  out.insert(out.end(), {'S', 'S', 'D', 'F'});
  audio::wav_detail::write_le<std::uint16_t>(out, kSsdfVersion);
  audio::wav_detail::write_le<std::uint16_t>(out, static_cast<std::uint16_t>(map.n_mels));
  audio::wav_detail::write_le<std::uint16_t>(out, static_cast<std::uint16_t>(map.frames));
  audio::wav_detail::write_le<std::uint16_t>(out, static_cast<std::uint16_t>(map.channels));
  audio::wav_detail::write_le<float>(out, map.floor_db);
  const auto* p = reinterpret_cast<const std::uint8_t*>(map.values.data());
  out.insert(out.end(), p, p + map.values.size() * sizeof(float));
  return out;
}

inline FeatureMap decode_ssdf(std::span<const std::uint8_t> bytes) {
  using audio::wav_detail::read_le;
  require(bytes.size() >= kSsdfHeaderBytes && std::memcmp(bytes.data(), "SSDF", 4) == 0, ErrorKind::Decode,
          "not an SSDF feature container");
  const auto version = read_le<std::uint16_t>(bytes, 4);
  require(version == kSsdfVersion, ErrorKind::UnsupportedFormat, "SSDF version " + std::to_string(version));
  FeatureMap map(read_le<std::uint16_t>(bytes, 6), read_le<std::uint16_t>(bytes, 8), read_le<std::uint16_t>(bytes, 10),
                 read_le<float>(bytes, 12));
  const std::size_t payload = map.values.size() * sizeof(float);
  require(bytes.size() == kSsdfHeaderBytes + payload, ErrorKind::Decode, "SSDF payload size mismatch");
  std::memcpy(map.values.data(), bytes.data() + kSsdfHeaderBytes, payload);
  return map;
}

inline void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "short write to " + path.string());
}

inline void save_ssdf(const FeatureMap& map, const std::filesystem::path& path) { write_bytes(path, encode_ssdf(map)); }

inline FeatureMap load_ssdf(const std::filesystem::path& path) { return decode_ssdf(audio::read_file_bytes(path)); }

/// NPY v1.0 array of little-endian float32 with the map's [n_mels, frames, channels] shape.
inline std::vector<std::uint8_t> encode_npy(const FeatureMap& map) {
  std::string header = "{'descr': '<f4', 'fortran_order': False, 'shape': (" + std::to_string(map.n_mels) + ", " +
                       std::to_string(map.frames) + ", " + std::to_string(map.channels) + "), }";
  const std::size_t preamble = 10;
  const std::size_t total = ((preamble + header.size() + 1 + 63) / 64) * 64;
  header.append(total - preamble - header.size() - 1, ' ');
  header.push_back('\n');
  std::vector<std::uint8_t> out = {0x93, 'N', 'U', 'M', 'P', 'Y', 1, 0};
  audio::wav_detail::write_le<std::uint16_t>(out, static_cast<std::uint16_t>(header.size()));
  out.insert(out.end(), header.begin(), header.end());
  const auto* p = reinterpret_cast<const std::uint8_t*>(map.values.data());
  out.insert(out.end(), p, p + map.values.size() * sizeof(float));
  return out;
}

inline void save_npy(const FeatureMap& map, const std::filesystem::path& path) { write_bytes(path, encode_npy(map)); }

}  // namespace ssd::features

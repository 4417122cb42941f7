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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ssd/core/error.hpp"

namespace ssd::features {

inline constexpr int kMelBands = 128;
inline constexpr int kChannels = 3;
inline constexpr int kPhraseFrames = 256;
inline constexpr int kCharacterFrames = 128;
inline constexpr double kDefaultFloorDb = -80.0;

/// Classifier input: decibel values laid out row-major as
/// [n_mels][frames][channels], all within [floor_db, 0].
struct FeatureMap {
  int n_mels = kMelBands;
  int frames = 0;
  int channels = kChannels;
  float floor_db = static_cast<float>(kDefaultFloorDb);
  std::vector<float> values;
  std::string sample_id;
  std::string config_hash;

  FeatureMap() = default;
  FeatureMap(int mels, int frame_count, int channel_count, float floor)
      : n_mels(mels),
        frames(frame_count),
        channels(channel_count),
        floor_db(floor),
        values(static_cast<std::size_t>(mels) * frame_count * channel_count, floor) {}

  std::size_t index(int mel, int frame, int channel) const {
    return (static_cast<std::size_t>(mel) * frames + frame) * channels + channel;
  }
  float& at(int mel, int frame, int channel) { return values[index(mel, frame, channel)]; }
  float at(int mel, int frame, int channel) const { return values[index(mel, frame, channel)]; }

  std::array<int, 3> shape() const { return {n_mels, frames, channels}; }
};

}  // namespace ssd::features

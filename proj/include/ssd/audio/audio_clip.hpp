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
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ssd/core/error.hpp"

namespace ssd::audio {

inline constexpr int kPipelineRateHz = 44100;

/// Mono PCM signal. Samples are finite and within [-1, 1]; the constructor
/// enforces this so every stage downstream can rely on it.
class AudioClip {
 public:
  AudioClip() = default;
  AudioClip(std::vector<double> samples, int sample_rate_hz, int source_bit_depth = 0)
      : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz), source_bit_depth_(source_bit_depth) {
    require(sample_rate_hz_ > 0, ErrorKind::Precondition, "sample rate must be positive");
    require(!samples_.empty(), ErrorKind::EmptyAudio, "clip has no samples");
    for (double s : samples_) {
      require(std::isfinite(s) && s >= -1.0 && s <= 1.0, ErrorKind::Precondition,
              "sample outside [-1, 1] or not finite");
    }
  }

  /// Builds a clip after hard-clipping every sample into [-1, 1]. Transforms
  /// whose output may ring past full scale (resampling, noise) use this.
  static AudioClip clipped(std::vector<double> samples, int sample_rate_hz, int source_bit_depth = 0) {
    for (double& s : samples) {
      require(std::isfinite(s), ErrorKind::Numeric, "non-finite sample produced");
      s = std::clamp(s, -1.0, 1.0);
    }
    return AudioClip(std::move(samples), sample_rate_hz, source_bit_depth);
  }

  const std::vector<double>& samples() const { return samples_; }
  int sample_rate_hz() const { return sample_rate_hz_; }
  int source_bit_depth() const { return source_bit_depth_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration_s() const { return static_cast<double>(samples_.size()) / sample_rate_hz_; }

  friend bool operator==(const AudioClip&, const AudioClip&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_hz_ = kPipelineRateHz;
  int source_bit_depth_ = 0;
};

inline double mean_power(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return x.empty() ? 0.0 : acc / static_cast<double>(x.size());
}

inline double rms(const std::vector<double>& x) { return std::sqrt(mean_power(x)); }

}  // namespace ssd::audio

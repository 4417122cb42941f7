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
#include <array>
#include <cmath>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ssd/audio/audio_clip.hpp"
#include "ssd/core/hash.hpp"
#include "ssd/features/feature_map.hpp"
#include "ssd/features/mel.hpp"

namespace ssd::features {

struct ChannelConfig {
  double window_ms = 25.0;
  double hop_ms = 10.0;
  int n_mels = kMelBands;
  int fft_size = 0;  // 0 selects the next power of two >= window samples
  double fmin_hz = 0.0;
  double fmax_hz = 0.0;  // 0 selects Nyquist

  /// Resolves the automatic fields for a given sample rate and checks the
  /// type invariants.
  ChannelConfig resolved(int sample_rate_hz) const {
    ChannelConfig c = *this;
    const int window = ms_to_samples(window_ms, sample_rate_hz);
    if (c.fft_size == 0) c.fft_size = dsp::next_pow2(window);
    if (c.fmax_hz == 0.0) c.fmax_hz = sample_rate_hz / 2.0;
    require(c.hop_ms > 0.0 && c.hop_ms <= c.window_ms, ErrorKind::Config, "need 0 < hop <= window");
    require(c.fft_size >= window, ErrorKind::Config, "fft size smaller than window");
    require(c.n_mels >= 1, ErrorKind::Config, "n_mels must be >= 1");
    require(c.fmin_hz >= 0.0 && c.fmin_hz < c.fmax_hz && c.fmax_hz <= sample_rate_hz / 2.0, ErrorKind::Config,
            "need 0 <= fmin < fmax <= sample_rate / 2");
    return c;
  }
};

enum class Preset { Phrase, Character };

inline std::string_view to_string(Preset p) { return p == Preset::Phrase ? "phrase" : "character"; }

inline Preset parse_preset(std::string_view name) {
  if (name == "phrase") return Preset::Phrase;
  if (name == "character") return Preset::Character;
  fail(ErrorKind::Validation, "unknown feature preset '" + std::string(name) + "'");
}

struct FeatureConfig {
  std::array<ChannelConfig, kChannels> channels{
      ChannelConfig{25.0, 10.0},
      ChannelConfig{50.0, 25.0},
      ChannelConfig{100.0, 50.0},
  };
  int target_frames = kPhraseFrames;
  double floor_db = kDefaultFloorDb;
  int sample_rate_hz = audio::kPipelineRateHz;

  static FeatureConfig for_preset(Preset p) {
    FeatureConfig c;
    c.target_frames = p == Preset::Phrase ? kPhraseFrames : kCharacterFrames;
    return c;
  }

  std::string hash() const {
    Fnv1a h;
    for (const auto& ch : channels) {
      h.update_value(ch.window_ms).update_value(ch.hop_ms).update_value(ch.n_mels).update_value(ch.fft_size);
      h.update_value(ch.fmin_hz).update_value(ch.fmax_hz);
    }
    h.update_value(target_frames).update_value(floor_db).update_value(sample_rate_hz);
    return hex64(h.digest());
  }
};

/// Power spectrogram -> mel projection -> dB relative to the map maximum,
/// floored at floor_db. A silent clip yields a uniform floor_db matrix.
inline RealMatrix power_to_db(const RealMatrix& mel_power, double floor_db) {
  constexpr double kAmin = 1e-10;
  RealMatrix db(mel_power.rows, mel_power.cols, floor_db);
  const double peak = *std::max_element(mel_power.data.begin(), mel_power.data.end());
  if (!(peak > kAmin)) return db;
  for (std::size_t i = 0; i < db.data.size(); ++i) {
    const double v = 10.0 * std::log10(std::max(mel_power.data[i], kAmin) / peak);
    db.data[i] = std::clamp(v, floor_db, 0.0);
  }
  return db;
}

/// Linear interpolation of each row onto `target` columns. Endpoints map to
/// endpoints; equal sizes are an exact copy.
inline RealMatrix resize_time_axis(const RealMatrix& m, int target) {
  require(target >= 1, ErrorKind::Parameter, "target frame count must be >= 1");
  if (m.cols == target) return m;
  RealMatrix out(m.rows, target);
  for (int t = 0; t < target; ++t) {
    const double pos = target == 1 || m.cols == 1 ? 0.0 : static_cast<double>(t) * (m.cols - 1) / (target - 1);
    const int left = std::min(static_cast<int>(pos), m.cols - 1);
    const int right = std::min(left + 1, m.cols - 1);
    const double alpha = pos - left;
    for (int r = 0; r < m.rows; ++r) out.at(r, t) = (1.0 - alpha) * m.at(r, left) + alpha * m.at(r, right);
  }
  return out;
}

/// Immutable three-channel extractor. Filterbanks are built once and the
/// object may be shared across threads.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(const FeatureConfig& config) : config_(config), hash_(config.hash()) {
    require(config_.target_frames >= 1, ErrorKind::Config, "target frames must be positive");
    std::set<double> hops;
    for (std::size_t c = 0; c < kChannels; ++c) {
      resolved_[c] = config_.channels[c].resolved(config_.sample_rate_hz);
      require(resolved_[c].n_mels == resolved_[0].n_mels, ErrorKind::Config, "channels disagree on n_mels");
      hops.insert(resolved_[c].hop_ms);
      banks_[c] = mel_filterbank(resolved_[c].n_mels, resolved_[c].fft_size, config_.sample_rate_hz,
                                 resolved_[c].fmin_hz, resolved_[c].fmax_hz);
      support_[c] = band_support(banks_[c]);
    }
    require(hops.size() == kChannels, ErrorKind::Config, "channel hop lengths must be distinct");
  }

  const FeatureConfig& config() const { return config_; }
  const std::string& config_hash() const { return hash_; }
  const ChannelConfig& channel(std::size_t c) const { return resolved_[c]; }

  /// One log-mel channel at its native frame rate, shape [n_mels, frames].
  RealMatrix channel_db(const audio::AudioClip& clip, std::size_t c) const {
    require(clip.sample_rate_hz() == config_.sample_rate_hz, ErrorKind::Precondition,
            "clip rate " + std::to_string(clip.sample_rate_hz()) + " differs from extractor rate " +
                std::to_string(config_.sample_rate_hz));
    const auto& cfg = resolved_[c];
    const auto mag = stft_magnitude(clip, cfg.window_ms, cfg.hop_ms, cfg.fft_size);
    const auto& fb = banks_[c];
    RealMatrix mel(fb.rows, mag.cols);
    for (int m = 0; m < fb.rows; ++m) {
      const auto [first, last] = support_[c][static_cast<std::size_t>(m)];
      for (int f = 0; f < mag.cols; ++f) {
        double acc = 0.0;
        for (int k = first; k <= last; ++k) {
          const double a = mag.at(k, f);
          acc += fb.at(m, k) * a * a;
        }
        mel.at(m, f) = acc;
      }
    }
    return power_to_db(mel, config_.floor_db);
  }

  FeatureMap extract(const audio::AudioClip& clip, std::string_view sample_id = {}) const {
    FeatureMap map(resolved_[0].n_mels, config_.target_frames, kChannels, static_cast<float>(config_.floor_db));
    map.sample_id = std::string(sample_id);
    map.config_hash = hash_;
    for (std::size_t c = 0; c < kChannels; ++c) {
      const auto resized = resize_time_axis(channel_db(clip, c), config_.target_frames);
      for (int m = 0; m < resized.rows; ++m) {
        for (int t = 0; t < resized.cols; ++t) map.at(m, t, static_cast<int>(c)) = static_cast<float>(resized.at(m, t));
      }
    }
    return map;
  }

 private:
  static std::vector<std::pair<int, int>> band_support(const RealMatrix& fb) {
    std::vector<std::pair<int, int>> support(static_cast<std::size_t>(fb.rows), {0, -1});
    for (int m = 0; m < fb.rows; ++m) {
      int first = -1, last = -1;
      for (int k = 0; k < fb.cols; ++k) {
        if (fb.at(m, k) > 0.0) {
          if (first < 0) first = k;
          last = k;
        }
      }
      support[static_cast<std::size_t>(m)] = {first, last};
    }
    return support;
  }

  FeatureConfig config_;
  std::string hash_;
  std::array<ChannelConfig, kChannels> resolved_{};
  std::array<RealMatrix, kChannels> banks_{};
  std::array<std::vector<std::pair<int, int>>, kChannels> support_{};
};

inline RealMatrix log_mel_channel(const audio::AudioClip& clip, const ChannelConfig& cfg,
                                  double floor_db = kDefaultFloorDb) {
  const auto resolved = cfg.resolved(clip.sample_rate_hz());
  const auto fb =
      mel_filterbank(resolved.n_mels, resolved.fft_size, clip.sample_rate_hz(), resolved.fmin_hz, resolved.fmax_hz);
  const auto mag = stft_magnitude(clip, resolved.window_ms, resolved.hop_ms, resolved.fft_size);
  RealMatrix mel(fb.rows, mag.cols);
  for (int m = 0; m < fb.rows; ++m) {
    for (int f = 0; f < mag.cols; ++f) {
      double acc = 0.0;
      for (int k = 0; k < fb.cols; ++k) acc += fb.at(m, k) * mag.at(k, f) * mag.at(k, f);
      mel.at(m, f) = acc;
    }
  }
  return power_to_db(mel, floor_db);
}

inline FeatureMap stack_three_channels(const audio::AudioClip& clip, const std::array<ChannelConfig, kChannels>& configs,
                                       int target_frames, double floor_db = kDefaultFloorDb) {
  require(target_frames == kPhraseFrames || target_frames == kCharacterFrames, ErrorKind::Parameter,
          "target frames must be 128 or 256");
  FeatureConfig fc;
  fc.channels = configs;
  fc.target_frames = target_frames;
  fc.floor_db = floor_db;
  fc.sample_rate_hz = clip.sample_rate_hz();
  return FeatureExtractor(fc).extract(clip);
}

}  // namespace ssd::features

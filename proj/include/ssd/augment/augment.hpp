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
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ssd/audio/audio_clip.hpp"
#include "ssd/audio/resample.hpp"
#include "ssd/core/error.hpp"
#include "ssd/core/hash.hpp"
#include "ssd/dsp/stft.hpp"

namespace ssd::augment {

using audio::AudioClip;

// ---------------------------------------------------------------------------
// Individual transforms
// ---------------------------------------------------------------------------

inline constexpr int kVocoderFft = 2048;
inline constexpr int kVocoderHop = 512;

/// Phase-vocoder time stretch. rate > 1 shortens, rate < 1 lengthens; the
/// result has round(len / rate) samples and the original pitch.
inline std::vector<double> time_stretch(std::span<const double> x, double rate) {
  require(rate > 0.0, ErrorKind::Parameter, "stretch rate must be positive");
  const auto spec = dsp::stft(x, kVocoderFft, kVocoderHop, kVocoderFft);
  const int bins = spec.bins;

  std::vector<double> steps;
  for (double t = 0.0; t < spec.frames; t += rate) steps.push_back(t);

  dsp::Spectrogram out;
  out.bins = bins;
  out.frames = static_cast<int>(steps.size());
  out.data.resize(static_cast<std::size_t>(bins) * out.frames);

  std::vector<double> advance(static_cast<std::size_t>(bins)), phase(static_cast<std::size_t>(bins));
  for (int k = 0; k < bins; ++k) {
    advance[static_cast<std::size_t>(k)] = 2.0 * M_PI * kVocoderHop * k / kVocoderFft;
    phase[static_cast<std::size_t>(k)] = std::arg(spec.at(k, 0));
  }
  const auto column = [&](int f, int k) {
    return f < spec.frames ? spec.at(k, f) : std::complex<double>(0.0, 0.0);
  };
  for (int j = 0; j < out.frames; ++j) {
    const double t = steps[static_cast<std::size_t>(j)];
    const int f = static_cast<int>(std::floor(t));
    const double alpha = t - f;
    for (int k = 0; k < bins; ++k) {
      const auto c0 = column(f, k), c1 = column(f + 1, k);
      const double mag = (1.0 - alpha) * std::abs(c0) + alpha * std::abs(c1);
      auto& acc = phase[static_cast<std::size_t>(k)];
      out.at(k, j) = std::polar(mag, acc);
      double dphase = std::arg(c1) - std::arg(c0) - advance[static_cast<std::size_t>(k)];
      dphase -= 2.0 * M_PI * std::round(dphase / (2.0 * M_PI));
      acc += advance[static_cast<std::size_t>(k)] + dphase;
    }
  }
  const auto length = static_cast<std::size_t>(std::llround(static_cast<double>(x.size()) / rate));
  return dsp::istft(out, kVocoderFft, kVocoderHop, std::max<std::size_t>(1, length));
}

/// Shifts pitch by `semitones` keeping duration: time-stretch by
/// 2^(-s/12), then resample back onto the original length.
inline AudioClip pitch_shift(const AudioClip& clip, double semitones) {
  require(std::abs(semitones) <= 12.0, ErrorKind::Parameter, "pitch shift limited to +/-12 semitones");
  const double rate = std::pow(2.0, -semitones / 12.0);
  const auto stretched = time_stretch(clip.samples(), rate);
  return AudioClip::clipped(audio::stretch_to_length(stretched, clip.size()), clip.sample_rate_hz(),
                            clip.source_bit_depth());
}

/// Circular shift by round(fraction * len) samples; positive moves content later.
inline AudioClip time_shift(const AudioClip& clip, double fraction) {
  require(std::abs(fraction) < 1.0, ErrorKind::Parameter, "shift fraction must be in (-1, 1)");
  auto samples = clip.samples();
  const auto n = static_cast<std::int64_t>(samples.size());
  std::int64_t shift = std::llround(fraction * static_cast<double>(n)) % n;
  if (shift < 0) shift += n;
  std::rotate(samples.begin(), samples.end() - shift, samples.end());
  return AudioClip(std::move(samples), clip.sample_rate_hz(), clip.source_bit_depth());
}

/// Plain resampling playback: length becomes round(len / factor).
inline AudioClip speed_scale(const AudioClip& clip, double factor) {
  require(factor >= 0.5 && factor <= 2.0, ErrorKind::Parameter, "speed factor must be in [0.5, 2.0]");
  const auto out_len =
      static_cast<std::size_t>(std::max<long long>(1, std::llround(static_cast<double>(clip.size()) / factor)));
  return AudioClip::clipped(audio::stretch_to_length(clip.samples(), out_len), clip.sample_rate_hz(),
                            clip.source_bit_depth());
}

struct CompressorSettings {
  double threshold_db = -20.0;
  double ratio = 4.0;
  double attack_ms = 5.0;
  double release_ms = 50.0;
  double rms_window_ms = 10.0;  // one-pole time constant of the level detector
};

/// Feed-forward compressor: RMS level detector, static gain curve above the
/// threshold, attack/release smoothing of the gain in dB. Gain is never
/// positive, so the output peak cannot exceed the input peak.
inline AudioClip dynamic_range_compress(const AudioClip& clip, const CompressorSettings& s = {}) {
  require(s.ratio >= 1.0, ErrorKind::Parameter, "compression ratio must be >= 1");
  require(s.threshold_db <= 0.0, ErrorKind::Parameter, "threshold must be <= 0 dBFS");
  require(s.attack_ms > 0.0 && s.release_ms > 0.0 && s.rms_window_ms > 0.0, ErrorKind::Parameter,
          "time constants must be positive");
  const double rate = clip.sample_rate_hz();
  const auto pole = [rate](double ms) { return std::exp(-1000.0 / (ms * rate)); };
  const double detector = pole(s.rms_window_ms), attack = pole(s.attack_ms), release = pole(s.release_ms);
  auto out = clip.samples();
  double power = 0.0;
  double gain_db = 0.0;
  for (double& x : out) {
    power = detector * power + (1.0 - detector) * x * x;
    double target_db = 0.0;
    if (power > 0.0) {
      const double level_db = 10.0 * std::log10(power);
      if (level_db > s.threshold_db) {
        target_db = std::min(0.0, (s.threshold_db + (level_db - s.threshold_db) / s.ratio) - level_db);
      }
    }
    const double coeff = target_db < gain_db ? attack : release;
    gain_db = coeff * gain_db + (1.0 - coeff) * target_db;
    if (gain_db < 0.0) x *= std::pow(10.0, gain_db / 20.0);
  }
  return AudioClip(std::move(out), clip.sample_rate_hz(), clip.source_bit_depth());
}

inline AudioClip dynamic_range_compress(const AudioClip& clip, double threshold_db, double ratio, double attack_ms,
                                        double release_ms) {
  return dynamic_range_compress(clip, CompressorSettings{threshold_db, ratio, attack_ms, release_ms});
}

inline AudioClip apply_gain(const AudioClip& clip, double gain_db) {
  require(std::abs(gain_db) <= 24.0, ErrorKind::Parameter, "gain limited to +/-24 dB");
  const double factor = std::pow(10.0, gain_db / 20.0);
  auto out = clip.samples();
  for (double& x : out) x *= factor;
  return AudioClip::clipped(std::move(out), clip.sample_rate_hz(), clip.source_bit_depth());
}

/// White Gaussian noise whose measured power is exactly
/// P_signal / 10^(snr/10). Exposed so the injected component can be checked.
inline std::vector<double> scaled_noise(const AudioClip& clip, double snr_db, std::uint64_t seed) {
  require(snr_db >= 0.0, ErrorKind::Parameter, "SNR must be >= 0 dB");
  const double signal_power = audio::mean_power(clip.samples());
  require(signal_power > 0.0, ErrorKind::Degenerate, "cannot set an SNR against a zero-power clip");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> noise(clip.size());
  for (double& v : noise) v = gauss(rng);
  const double target = signal_power / std::pow(10.0, snr_db / 10.0);
  const double scale = std::sqrt(target / audio::mean_power(noise));
  for (double& v : noise) v *= scale;
  return noise;
}

inline AudioClip add_noise_snr(const AudioClip& clip, double snr_db, std::uint64_t seed) {
  const auto noise = scaled_noise(clip, snr_db, seed);
  auto out = clip.samples();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += noise[i];
  return AudioClip::clipped(std::move(out), clip.sample_rate_hz(), clip.source_bit_depth());
}

// ---------------------------------------------------------------------------
// Specs and the nine-fold expansion
// ---------------------------------------------------------------------------

struct PitchShift {
  double semitones;
};
struct TimeShift {
  double fraction;
};
struct SpeedScale {
  double factor;
};
struct DynamicRangeCompress {
  CompressorSettings settings;
};
struct Gain {
  double db;
};
struct AddNoise {
  double snr_db;
};

struct AugmentationSpec {
  std::variant<PitchShift, TimeShift, SpeedScale, DynamicRangeCompress, Gain, AddNoise> params;
  std::uint64_t seed = 0;
};

inline std::string_view kind_name(const AugmentationSpec& spec) {
  static constexpr std::array<std::string_view, 6> kNames = {"pitch_shift",  "time_shift", "speed_scale",
                                                             "drc",          "gain",       "noise"};
  return kNames[spec.params.index()];
}

inline void validate(const AugmentationSpec& spec) {
  std::visit(
      [](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, PitchShift>) {
          require(std::abs(p.semitones) <= 12.0, ErrorKind::Parameter, "semitones outside [-12, 12]");
        } else if constexpr (std::is_same_v<P, TimeShift>) {
          require(std::abs(p.fraction) < 1.0, ErrorKind::Parameter, "shift fraction outside (-1, 1)");
        } else if constexpr (std::is_same_v<P, SpeedScale>) {
          require(p.factor >= 0.5 && p.factor <= 2.0, ErrorKind::Parameter, "speed factor outside [0.5, 2]");
        } else if constexpr (std::is_same_v<P, Gain>) {
          require(std::abs(p.db) <= 24.0, ErrorKind::Parameter, "gain outside [-24, 24] dB");
        } else if constexpr (std::is_same_v<P, AddNoise>) {
          require(p.snr_db >= 0.0, ErrorKind::Parameter, "negative SNR");
        } else {
          require(p.settings.ratio >= 1.0, ErrorKind::Parameter, "compression ratio below 1");
        }
      },
      spec.params);
}

inline AudioClip apply(const AugmentationSpec& spec, const AudioClip& clip) {
  validate(spec);
  return std::visit(
      [&](const auto& p) -> AudioClip {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, PitchShift>) return pitch_shift(clip, p.semitones);
        else if constexpr (std::is_same_v<P, TimeShift>) return time_shift(clip, p.fraction);
        else if constexpr (std::is_same_v<P, SpeedScale>) return speed_scale(clip, p.factor);
        else if constexpr (std::is_same_v<P, DynamicRangeCompress>) return dynamic_range_compress(clip, p.settings);
        else if constexpr (std::is_same_v<P, Gain>) return apply_gain(clip, p.db);
        else return add_noise_snr(clip, p.snr_db, spec.seed);
      },
      spec.params);
}

/// Parameter ranges the expansion draws from; configurable from the pipeline
/// config file.
struct AugmentParams {
  double pitch_semitones = 2.0;
  double shift_fraction = 0.10;
  double speed_spread = 0.25;  // factor ~ U[1 - spread, 1 + spread]
  double gain_spread_db = 3.0;  // gain ~ U[-spread, +spread]
  double noise_snr_min_db = 0.0;
  double noise_snr_max_db = 10.0;
  CompressorSettings compressor{};
};

inline constexpr int kExpansionVariants = 8;
inline constexpr int kExpansionFactor = kExpansionVariants + 1;

/// Exactly eight variant specs, drawn from a PRNG keyed by
/// (sample_id, master_seed).
struct ExpansionPlan {
  std::array<AugmentationSpec, kExpansionVariants> variants;
};

inline ExpansionPlan make_expansion_plan(std::string_view sample_id, std::uint64_t master_seed,
                                         const AugmentParams& params = {}) {
  std::mt19937_64 rng(keyed_seed(sample_id, master_seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const double speed = uniform(1.0 - params.speed_spread, 1.0 + params.speed_spread);
  const double gain = uniform(-params.gain_spread_db, params.gain_spread_db);
  const double snr = uniform(params.noise_snr_min_db, params.noise_snr_max_db);
  const std::uint64_t noise_seed = rng();

  ExpansionPlan plan{{
      AugmentationSpec{PitchShift{+params.pitch_semitones}},
      AugmentationSpec{PitchShift{-params.pitch_semitones}},
      AugmentationSpec{TimeShift{+params.shift_fraction}},
      AugmentationSpec{TimeShift{-params.shift_fraction}},
      AugmentationSpec{SpeedScale{speed}},
      AugmentationSpec{DynamicRangeCompress{params.compressor}},
      AugmentationSpec{Gain{gain}},
      AugmentationSpec{AddNoise{snr}, noise_seed},
  }};
  for (const auto& v : plan.variants) validate(v);
  return plan;
}

/// Original first, then the eight variants in plan order.
inline std::vector<AudioClip> expand_nine_fold(const AudioClip& clip, std::string_view sample_id,
                                               std::uint64_t master_seed, const AugmentParams& params = {}) {
  const auto plan = make_expansion_plan(sample_id, master_seed, params);
  std::vector<AudioClip> out;
  out.reserve(kExpansionFactor);
  out.push_back(clip);
  for (const auto& spec : plan.variants) out.push_back(apply(spec, clip));
  return out;
}

/// Variant `index` of the expansion (0 = original) without building the rest.
inline AudioClip expansion_variant(const AudioClip& clip, std::string_view sample_id, std::uint64_t master_seed,
                                   int index, const AugmentParams& params = {}) {
  require(index >= 0 && index < kExpansionFactor, ErrorKind::Parameter, "expansion index out of range");
  if (index == 0) return clip;
  return apply(make_expansion_plan(sample_id, master_seed, params).variants[static_cast<std::size_t>(index - 1)], clip);
}

}  // namespace ssd::augment

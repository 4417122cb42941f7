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
#include <numeric>
#include <span>
#include <vector>

#include "ssd/audio/audio_clip.hpp"
#include "ssd/core/error.hpp"

namespace ssd::audio {

/// Modified Bessel function of the first kind, order zero (power series).
inline double bessel_i0(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 64 && term > 1e-17 * sum; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

/// Polyphase windowed-sinc interpolator: 32 taps per phase, Kaiser window
/// with beta 8.6, each phase normalised to unit DC gain.
class PolyphaseFilter {
 public:
  static constexpr int kTaps = 32;
  static constexpr int kHalf = kTaps / 2;
  static constexpr double kBeta = 8.6;
  static constexpr double kRolloff = 0.95;

  /// `cutoff` is relative to the input Nyquist frequency, in (0, 1].
  PolyphaseFilter(int phases, double cutoff) : phases_(phases), table_(static_cast<std::size_t>(phases) * kTaps) {
    require(phases >= 1, ErrorKind::Parameter, "phase count must be positive");
    require(cutoff > 0.0 && cutoff <= 1.0, ErrorKind::Parameter, "cutoff must be in (0, 1]");
    const double fc = cutoff * kRolloff;
    const double i0_beta = bessel_i0(kBeta);
    for (int p = 0; p < phases; ++p) {
      const double frac = static_cast<double>(p) / phases;
      double* row = &table_[static_cast<std::size_t>(p) * kTaps];
      double sum = 0.0;
      for (int k = 0; k < kTaps; ++k) {
        const double tau = (k - kHalf + 1) - frac;  // tap offsets -15..16
        const double arg = fc * tau;
        const double sinc = arg == 0.0 ? 1.0 : std::sin(M_PI * arg) / (M_PI * arg);
        const double r = tau / (kHalf + 1);
        const double window = bessel_i0(kBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
        row[k] = fc * sinc * window;
        sum += row[k];
      }
      for (int k = 0; k < kTaps; ++k) row[k] /= sum;
    }
  }

  int phases() const { return phases_; }

  /// Signal value at input position `base + phase / phases`; zero outside the signal.
  double at(std::span<const double> x, std::int64_t base, int phase) const {
    const double* row = &table_[static_cast<std::size_t>(phase) * kTaps];
    const auto n = static_cast<std::int64_t>(x.size());
    double acc = 0.0;
    for (int k = 0; k < kTaps; ++k) {
      const std::int64_t idx = base + k - kHalf + 1;
      if (idx >= 0 && idx < n) acc += row[k] * x[static_cast<std::size_t>(idx)];
    }
    return acc;
  }

 private:
  int phases_;
  std::vector<double> table_;
};

namespace resample_detail {

inline constexpr int kMaxExactPhases = 4096;
inline constexpr int kFractionalPhases = 1024;

// Reads `out_len` points at positions n * step_num / step_den (input samples).
inline std::vector<double> run(std::span<const double> x, std::int64_t step_num, std::int64_t step_den,
                               std::size_t out_len, double cutoff) {
  const bool exact = step_den <= kMaxExactPhases;
  const int phases = exact ? static_cast<int>(step_den) : kFractionalPhases;
  const PolyphaseFilter filter(phases, cutoff);
  std::vector<double> y(out_len);
  for (std::size_t n = 0; n < out_len; ++n) {
    const std::int64_t num = static_cast<std::int64_t>(n) * step_num;
    std::int64_t base = num / step_den;
    std::int64_t phase = num % step_den;
    if (!exact) {
      phase = (phase * phases + step_den / 2) / step_den;
      if (phase == phases) {
        ++base;
        phase = 0;
      }
    }
    y[n] = filter.at(x, base, static_cast<int>(phase));
  }
  return y;
}

}  // namespace resample_detail

/// Band-limited sample-rate conversion. Output length is
/// round(len * target / source).
inline AudioClip resample(const AudioClip& clip, int target_rate_hz) {
  require(target_rate_hz > 0, ErrorKind::Parameter, "target rate must be positive");
  const int source = clip.sample_rate_hz();
  if (source == target_rate_hz) return clip;
  const std::int64_t g = std::gcd(source, target_rate_hz);
  const std::int64_t up = target_rate_hz / g;
  const std::int64_t down = source / g;
  const auto len = static_cast<std::int64_t>(clip.size());
  const auto out_len = static_cast<std::size_t>(std::max<std::int64_t>(1, (len * up + down / 2) / down));
  const double cutoff = std::min(1.0, static_cast<double>(target_rate_hz) / source);
  return AudioClip::clipped(resample_detail::run(clip.samples(), down, up, out_len, cutoff), target_rate_hz,
                            clip.source_bit_depth());
}

/// Maps the whole signal onto `out_len` samples (uniform time scaling).
/// Tempo and pitch change together, like playing a tape at another speed.
inline std::vector<double> stretch_to_length(std::span<const double> x, std::size_t out_len) {
  require(!x.empty() && out_len > 0, ErrorKind::Precondition, "stretch needs non-empty input and output");
  if (out_len == x.size()) return {x.begin(), x.end()};
  // Step expressed on a fine rational grid so the polyphase path applies.
  constexpr std::int64_t kDen = 1 << 20;
  const auto step_num = static_cast<std::int64_t>(
      std::llround(static_cast<double>(x.size()) / static_cast<double>(out_len) * kDen));
  const double cutoff = std::min(1.0, static_cast<double>(out_len) / static_cast<double>(x.size()));
  return resample_detail::run(x, step_num, kDen, out_len, cutoff);
}

}  // namespace ssd::audio

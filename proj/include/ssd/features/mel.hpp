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
#include <string>
#include <vector>

#include "ssd/audio/audio_clip.hpp"
#include "ssd/core/error.hpp"
#include "ssd/dsp/stft.hpp"

namespace ssd::features {

/// Dense row-major matrix of doubles.
struct RealMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  RealMatrix() = default;
  RealMatrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

/// HTK mel scale.
// natural-log form; the 2595*log10 variant rounds its constant and puts
// 1000 Hz at 999.986 mel
inline double hz_to_mel(double hz) { return 1127.0 * std::log1p(hz / 700.0); }
inline double mel_to_hz(double mel) { return 700.0 * std::expm1(mel / 1127.0); }

inline int ms_to_samples(double ms, int sample_rate_hz) {
  return static_cast<int>(std::lround(ms * sample_rate_hz / 1000.0));
}

/// Magnitude STFT, shape [fft_size / 2 + 1, frames]. Centred framing with
/// reflect padding; frames = 1 + floor(len / hop).
inline RealMatrix stft_magnitude(const audio::AudioClip& clip, double window_ms, double hop_ms, int fft_size) {
  const int window = ms_to_samples(window_ms, clip.sample_rate_hz());
  const int hop = ms_to_samples(hop_ms, clip.sample_rate_hz());
  require(window >= 1 && hop >= 1, ErrorKind::Parameter, "window and hop must span at least one sample");
  require(fft_size >= window, ErrorKind::Parameter,
          "fft size " + std::to_string(fft_size) + " smaller than window " + std::to_string(window));
  const auto spec = dsp::stft(clip.samples(), window, hop, fft_size);
  RealMatrix mag(spec.bins, spec.frames);
  for (int f = 0; f < spec.frames; ++f) {
    for (int k = 0; k < spec.bins; ++k) mag.at(k, f) = std::abs(spec.at(k, f));
  }
  return mag;
}

/// Triangular mel filterbank, shape [n_mels, fft_size / 2 + 1]. Centres are
/// equally spaced on the mel scale between fmin and fmax; each row is scaled
/// so its largest weight is exactly 1.
inline RealMatrix mel_filterbank(int n_mels, int fft_size, int sample_rate_hz, double fmin_hz, double fmax_hz) {
  require(n_mels >= 1, ErrorKind::Config, "n_mels must be >= 1");
  require(fft_size >= 2, ErrorKind::Config, "fft size must be >= 2");
  require(fmin_hz >= 0.0 && fmin_hz < fmax_hz && fmax_hz <= sample_rate_hz / 2.0, ErrorKind::Config,
          "need 0 <= fmin < fmax <= sample_rate / 2");
  const int bins = fft_size / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate_hz) / fft_size;
  const double mel_lo = hz_to_mel(fmin_hz), mel_hi = hz_to_mel(fmax_hz);

  std::vector<double> edges(static_cast<std::size_t>(n_mels) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / (n_mels + 1));
  }
  long previous_bin = -1;
  for (int m = 1; m <= n_mels; ++m) {
    const long bin = std::lround(edges[static_cast<std::size_t>(m)] / bin_hz);
    require(bin > previous_bin, ErrorKind::Config,
            std::to_string(n_mels) + " mel bands too many for fft size " + std::to_string(fft_size) +
                ": adjacent centres share FFT bin " + std::to_string(bin));
    previous_bin = bin;
  }

  RealMatrix fb(n_mels, bins);
  for (int m = 0; m < n_mels; ++m) {
    const double lo = edges[static_cast<std::size_t>(m)];
    const double centre = edges[static_cast<std::size_t>(m) + 1];
    const double hi = edges[static_cast<std::size_t>(m) + 2];
    double peak = 0.0;
    for (int k = 0; k < bins; ++k) {
      const double f = k * bin_hz;
      const double w = std::max(0.0, std::min((f - lo) / (centre - lo), (hi - f) / (hi - centre)));
      fb.at(m, k) = w;
      peak = std::max(peak, w);
    }
    require(peak > 0.0, ErrorKind::Config, "mel band " + std::to_string(m) + " covers no FFT bin");
    for (int k = 0; k < bins; ++k) fb.at(m, k) /= peak;
  }
  return fb;
}

}  // namespace ssd::features

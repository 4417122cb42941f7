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
#include <complex>
#include <span>
#include <vector>

#include "ssd/dsp/fft.hpp"

namespace ssd::dsp {

/// Column-major complex spectrogram: frame f occupies [f * bins, (f + 1) * bins).
struct Spectrogram {
  int bins = 0;
  int frames = 0;
  std::vector<std::complex<double>> data;

  std::complex<double>& at(int bin, int frame) { return data[static_cast<std::size_t>(frame) * bins + bin]; }
  const std::complex<double>& at(int bin, int frame) const {
    return data[static_cast<std::size_t>(frame) * bins + bin];
  }
};

/// Centred STFT: the signal is reflect-padded by fft_size / 2 on each side and
/// a Hann window of `window` samples sits in the middle of each fft_size frame.
/// Frame count is 1 + floor(len / hop).
inline Spectrogram stft(std::span<const double> x, int window, int hop, int fft_size) {
  require(window >= 1 && hop >= 1, ErrorKind::Parameter, "window and hop must be positive");
  require(fft_size >= window, ErrorKind::Parameter, "fft size smaller than window");
  require(!x.empty(), ErrorKind::EmptyAudio, "stft of empty signal");
  const RealFft fft(fft_size);
  const auto win = hann_window(window);
  const int lead = (fft_size - window) / 2;
  const int pad = fft_size / 2;

  Spectrogram spec;
  spec.bins = fft.bins();
  spec.frames = 1 + static_cast<int>(x.size() / static_cast<std::size_t>(hop));
  spec.data.resize(static_cast<std::size_t>(spec.bins) * spec.frames);
  std::vector<double> frame(static_cast<std::size_t>(fft_size));
  for (int f = 0; f < spec.frames; ++f) {
    std::fill(frame.begin(), frame.end(), 0.0);
    const std::int64_t start = static_cast<std::int64_t>(f) * hop - pad + lead;
    for (int i = 0; i < window; ++i) {
      frame[static_cast<std::size_t>(lead + i)] = win[static_cast<std::size_t>(i)] * x[reflect_index(start + i, x.size())];
    }
    fft.forward(frame, std::span(spec.data).subspan(static_cast<std::size_t>(f) * spec.bins, spec.bins));
  }
  return spec;
}

/// Inverse of stft() with window-square normalised overlap-add; returns
/// exactly `length` samples.
inline std::vector<double> istft(const Spectrogram& spec, int window, int hop, std::size_t length) {
  const int fft_size = (spec.bins - 1) * 2;
  const RealFft fft(fft_size);
  const auto win = hann_window(window);
  const int lead = (fft_size - window) / 2;
  const int pad = fft_size / 2;
  const std::size_t total = static_cast<std::size_t>(spec.frames - 1) * hop + fft_size;
  std::vector<double> acc(total, 0.0), norm(total, 0.0), frame(static_cast<std::size_t>(fft_size));
  for (int f = 0; f < spec.frames; ++f) {
    fft.inverse(std::span(spec.data).subspan(static_cast<std::size_t>(f) * spec.bins, spec.bins), frame);
    const std::size_t start = static_cast<std::size_t>(f) * hop;
    for (int i = 0; i < window; ++i) {
      const double w = win[static_cast<std::size_t>(i)];
      acc[start + lead + i] += w * frame[static_cast<std::size_t>(lead + i)] / fft_size;
      norm[start + lead + i] += w * w;
    }
  }
  std::vector<double> y(length, 0.0);
  for (std::size_t n = 0; n < length; ++n) {
    const std::size_t k = n + pad;
    if (k < total && norm[k] > 1e-10) y[n] = acc[k] / norm[k];
  }
  return y;
}

}  // namespace ssd::dsp

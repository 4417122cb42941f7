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

// Test-only oracles. These deliberately avoid the library's FFT and
// filterbank code paths so they can check them independently.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <random>
#include <string>
#include <vector>

namespace ssd::testing {

inline std::vector<double> sine(double freq_hz, double amplitude, int sample_rate, std::size_t n, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amplitude * std::sin(2.0 * M_PI * freq_hz * i / sample_rate + phase);
  return x;
}

/// Hann-windowed direct DFT magnitude evaluated at an arbitrary frequency.
inline double dft_magnitude(const std::vector<double>& x, int sample_rate, double freq_hz) {
  double re = 0.0, im = 0.0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / n);
    const double arg = 2.0 * M_PI * freq_hz * i / sample_rate;
    re += w * x[i] * std::cos(arg);
    im -= w * x[i] * std::sin(arg);
  }
  return std::hypot(re, im);
}

/// Frequency with the largest DFT magnitude on a uniform grid in [lo, hi].
inline double dominant_frequency(const std::vector<double>& x, int sample_rate, double lo, double hi, double step) {
  double best_f = lo, best_m = -1.0;
  for (double f = lo; f <= hi; f += step) {
    const double m = dft_magnitude(x, sample_rate, f);
    if (m > best_m) {
      best_m = m;
      best_f = f;
    }
  }
  return best_f;
}

inline double rms(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

/// Hand-assembled canonical 44-byte-header WAV, independent of the encoder.
inline std::vector<std::uint8_t> raw_wav(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                                         std::uint16_t bits, const std::vector<std::uint8_t>& payload) {
  std::vector<std::uint8_t> out;
  auto put = [&](const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out.insert(out.end(), b, b + n);
  };
  auto u32 = [&](std::uint32_t v) { put(&v, 4); };
  auto u16 = [&](std::uint16_t v) { put(&v, 2); };
  put("RIFF", 4);
  u32(static_cast<std::uint32_t>(36 + payload.size()));
  put("WAVE", 4);
  put("fmt ", 4);
  u32(16);
  u16(format);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(static_cast<std::uint16_t>(channels * bits / 8));
  u16(bits);
  put("data", 4);
  u32(static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

template <typename T>
std::vector<std::uint8_t> le_bytes(const std::vector<T>& values) {
  std::vector<std::uint8_t> out(values.size() * sizeof(T));
  std::memcpy(out.data(), values.data(), out.size());
  return out;
}

}  // namespace ssd::testing

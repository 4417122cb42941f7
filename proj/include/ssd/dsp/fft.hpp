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

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <vector>

#include "ssd/core/error.hpp"

namespace ssd::dsp {

/// Real-input FFT of a fixed size, backed by FFTW. Plans are created once per
/// size and shared; FFTW plan creation is not thread-safe but execution on
/// caller-owned arrays is, so only the cache lookup is locked.
class RealFft {
 public:
  explicit RealFft(int size) : size_(size) {
    require(size >= 2, ErrorKind::Parameter, "FFT size must be at least 2");
    std::lock_guard lock(cache_mutex());
    auto& cache = plan_cache();
    auto it = cache.find(size);
    if (it == cache.end()) {
      std::vector<double> real(static_cast<std::size_t>(size));
      std::vector<std::complex<double>> spec(static_cast<std::size_t>(size / 2 + 1));
      auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
      Plans plans;
      plans.forward = fftw_plan_dft_r2c_1d(size, real.data(), cplx, FFTW_ESTIMATE | FFTW_UNALIGNED);
      plans.inverse =
          fftw_plan_dft_c2r_1d(size, cplx, real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_DESTROY_INPUT);
      it = cache.emplace(size, plans).first;
    }
    plans_ = it->second;
  }

  int size() const { return size_; }
  int bins() const { return size_ / 2 + 1; }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const {
    require(in.size() == static_cast<std::size_t>(size_) && out.size() == static_cast<std::size_t>(bins()),
            ErrorKind::Shape, "FFT buffer size mismatch");
    // r2c never writes its input.
    fftw_execute_dft_r2c(plans_.forward, const_cast<double*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
  }

  /// Unnormalised inverse: forward then inverse scales by size().
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
    require(in.size() == static_cast<std::size_t>(bins()) && out.size() == static_cast<std::size_t>(size_),
            ErrorKind::Shape, "FFT buffer size mismatch");
    std::vector<std::complex<double>> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(plans_.inverse, reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  }

 private:
  struct Plans {
    fftw_plan forward = nullptr;
    fftw_plan inverse = nullptr;
  };
  static std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
  }
  static std::map<int, Plans>& plan_cache() {
    static std::map<int, Plans> cache;
    return cache;
  }

  int size_;
  Plans plans_;
};

inline int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Periodic Hann window (the form used for STFT analysis).
inline std::vector<double> hann_window(int length) {
  std::vector<double> w(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) w[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / length);
  return w;
}

/// Index into a signal of length n, mirrored at both ends without repeating
/// the edge sample. Works for any offset, including ones beyond one period.
inline std::size_t reflect_index(std::int64_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::int64_t>(2 * (n - 1));
  std::int64_t m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<std::int64_t>(n)) m = period - m;
  return static_cast<std::size_t>(m);
}

}  // namespace ssd::dsp

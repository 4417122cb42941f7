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

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "ssd/core/error.hpp"

namespace ssd::dataset {

/// Per-class loss multipliers, indexed by class.
struct ClassWeights {
  std::vector<double> weights;

  static ClassWeights uniform(std::size_t classes) { return {std::vector<double>(classes, 1.0)}; }
  double operator[](std::size_t c) const { return weights[c]; }
  std::size_t size() const { return weights.size(); }
};

/// Balanced inverse-frequency weights: w_c = N / (K * n_c).
inline ClassWeights compute_class_weights(const std::vector<std::int64_t>& counts) {
  require(!counts.empty(), ErrorKind::Degenerate, "no classes");
  for (std::size_t c = 0; c < counts.size(); ++c) {
    require(counts[c] > 0, ErrorKind::Degenerate, "class " + std::to_string(c) + " has no samples");
  }
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::int64_t{0}));
  const double k = static_cast<double>(counts.size());
  ClassWeights w;
  for (auto n : counts) w.weights.push_back(total / (k * static_cast<double>(n)));
  return w;
}

}  // namespace ssd::dataset

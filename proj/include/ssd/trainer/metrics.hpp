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
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "ssd/core/error.hpp"

namespace ssd::trainer {

/// rows = predicted class, columns = target class.
struct Confusion {
  int classes = 0;
  std::vector<std::vector<std::int64_t>> counts;

  explicit Confusion(int k = 0) : classes(k), counts(static_cast<std::size_t>(k), std::vector<std::int64_t>(static_cast<std::size_t>(k), 0)) {}

  void add(int predicted, int target) {
    require(predicted >= 0 && predicted < classes && target >= 0 && target < classes, ErrorKind::Shape,
            "class index outside the confusion matrix");
    ++counts[static_cast<std::size_t>(predicted)][static_cast<std::size_t>(target)];
  }

  std::int64_t total() const {
    std::int64_t n = 0;
    for (const auto& row : counts) n = std::accumulate(row.begin(), row.end(), n);
    return n;
  }

  std::int64_t trace() const {
    std::int64_t t = 0;
    for (int c = 0; c < classes; ++c) t += counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)];
    return t;
  }

  double accuracy() const {
    const auto n = total();
    require(n > 0, ErrorKind::Degenerate, "empty confusion matrix");
    return static_cast<double>(trace()) / static_cast<double>(n);
  }

  /// Share of target class c predicted as c.
  double recall(int c) const {
    std::int64_t col = 0;
    for (int r = 0; r < classes; ++r) col += counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    return col == 0 ? 0.0 : static_cast<double>(counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)]) / col;
  }

  friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Index of the largest value; ties go to the lowest index.
template <typename It>
int argmax(It first, It last) {
  int best = 0, i = 0;
  for (auto it = first; it != last; ++it, ++i) {
    if (*it > *(first + best)) best = i;
  }
  return best;
}

inline Confusion confusion_from_labels(const std::vector<int>& predicted, const std::vector<int>& target, int classes) {
  require(predicted.size() == target.size(), ErrorKind::Shape, "prediction and target counts differ");
  require(!target.empty(), ErrorKind::Degenerate, "empty test set");
  Confusion m(classes);
  for (std::size_t i = 0; i < target.size(); ++i) m.add(predicted[i], target[i]);
  return m;
}

/// Box-plot summary: mean plus min / quartiles / max, quartiles by linear
/// interpolation between order statistics.
struct Summary {
  double mean = 0, min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  friend bool operator==(const Summary&, const Summary&) = default;
};

inline double quantile(std::vector<double> v, double q) {
  require(!v.empty(), ErrorKind::Degenerate, "quantile of nothing");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline Summary summarize(const std::vector<double>& values) {
  require(!values.empty(), ErrorKind::Degenerate, "no values to summarise");
  Summary s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.q1 = quantile(values, 0.25);
  s.median = quantile(values, 0.5);
  s.q3 = quantile(values, 0.75);
  return s;
}

/// One-decimal rendering used in reports ("69.9").
inline std::string one_decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

}  // namespace ssd::trainer

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
#include <vector>

#include "ssd/core/error.hpp"
#include "ssd/nnet/tensor.hpp"

namespace ssd::nnet {

inline constexpr double kProbEpsilon = 1e-7;

enum class LossKind { CategoricalCE, BinaryCE };

inline std::string to_string(LossKind k) { return k == LossKind::CategoricalCE ? "categorical_ce" : "binary_ce"; }

/// Mean over the batch of -w_y * log(clamp(p_y, 1e-7, 1)). Binary
/// cross-entropy is the same expression on a two-column softmax. When
/// `dlogits` is given it receives the gradient with respect to the softmax
/// inputs; a clamped row contributes no gradient.
template <typename T>
T cross_entropy(const Tensor<T>& probs, const std::vector<int>& labels, const std::vector<double>& class_weights,
                Tensor<T>* dlogits = nullptr) {
  require(probs.shape.size() == 2, ErrorKind::Shape, "probabilities must be [N, K]");
  const int n = probs.shape[0], k = probs.shape[1];
  require(static_cast<int>(labels.size()) == n, ErrorKind::Shape, "label count does not match batch");
  require(static_cast<int>(class_weights.size()) == k, ErrorKind::Shape, "class weight count does not match K");
  if (dlogits) *dlogits = Tensor<T>({n, k});
  double total = 0.0;
  for (int s = 0; s < n; ++s) {
    const int y = labels[static_cast<std::size_t>(s)];
    require(y >= 0 && y < k, ErrorKind::Shape, "label out of range");
    const double w = class_weights[static_cast<std::size_t>(y)];
    const double p = static_cast<double>(probs[static_cast<std::size_t>(s) * k + y]);
    total += -w * std::log(std::clamp(p, kProbEpsilon, 1.0));
    if (dlogits && p > kProbEpsilon) {
      for (int j = 0; j < k; ++j) {
        const double target = j == y ? 1.0 : 0.0;
        (*dlogits)[static_cast<std::size_t>(s) * k + j] =
            static_cast<T>(w * (static_cast<double>(probs[static_cast<std::size_t>(s) * k + j]) - target) / n);
      }
    }
  }
  const double loss = total / n;
  if (!std::isfinite(loss)) fail(ErrorKind::Numeric, "loss is not finite");
  return static_cast<T>(loss);
}

/// One-hot target form.
template <typename T>
T cross_entropy(const Tensor<T>& probs, const Tensor<T>& one_hot, const std::vector<double>& class_weights,
                Tensor<T>* dlogits = nullptr) {
  require(one_hot.shape == probs.shape, ErrorKind::Shape, "target shape does not match probabilities");
  const int n = probs.shape[0], k = probs.shape[1];
  std::vector<int> labels;
  for (int s = 0; s < n; ++s) {
    int hot = -1;
    for (int j = 0; j < k; ++j) {
      const T v = one_hot[static_cast<std::size_t>(s) * k + j];
      require(v == T(0) || v == T(1), ErrorKind::Shape, "targets must be one-hot");
      if (v == T(1)) {
        require(hot < 0, ErrorKind::Shape, "targets must be one-hot");
        hot = j;
      }
    }
    require(hot >= 0, ErrorKind::Shape, "targets must be one-hot");
    labels.push_back(hot);
  }
  return cross_entropy(probs, labels, class_weights, dlogits);
}

}  // namespace ssd::nnet

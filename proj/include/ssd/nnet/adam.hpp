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
#include <vector>

#include "ssd/core/error.hpp"
#include "ssd/nnet/tensor.hpp"

namespace ssd::nnet {

struct AdamHyper {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

template <typename T>
struct AdamState {
  std::vector<Tensor<T>> m, v;
  long t = 0;

  static AdamState zeros_like(const std::vector<Tensor<T>>& params) {
    AdamState s;
    for (const auto& p : params) {
      s.m.emplace_back(p.shape);
      s.v.emplace_back(p.shape);
    }
    return s;
  }
};

/// One bias-corrected Adam update at step t (1-based).
template <typename T>
void adam_step(std::vector<Tensor<T>>& weights, const std::vector<Tensor<T>>& grads, AdamState<T>& state,
               const AdamHyper& h, long t) {
  require(t >= 1, ErrorKind::Parameter, "adam step t must be >= 1");
  require(grads.size() == weights.size() && state.m.size() == weights.size() && state.v.size() == weights.size(),
          ErrorKind::Shape, "adam state does not match weights");
  const double c1 = 1.0 - std::pow(h.beta1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(h.beta2, static_cast<double>(t));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    require(grads[i].shape == weights[i].shape && state.m[i].shape == weights[i].shape, ErrorKind::Shape,
            "adam tensor shape mismatch");
    auto& w = weights[i].data;
    auto& m = state.m[i].data;
    auto& v = state.v[i].data;
    const auto& g = grads[i].data;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double gj = static_cast<double>(g[j]);
      const double mj = h.beta1 * static_cast<double>(m[j]) + (1.0 - h.beta1) * gj;
      const double vj = h.beta2 * static_cast<double>(v[j]) + (1.0 - h.beta2) * gj * gj;
      m[j] = static_cast<T>(mj);
      v[j] = static_cast<T>(vj);
      w[j] = static_cast<T>(static_cast<double>(w[j]) - h.lr * (mj / c1) / (std::sqrt(vj / c2) + h.epsilon));
    }
  }
  state.t = t;
}

}  // namespace ssd::nnet

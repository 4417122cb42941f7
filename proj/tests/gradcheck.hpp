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

// Finite-difference gradient oracle shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ssd/core/error.hpp"
#include "ssd/nnet/loss.hpp"
#include "ssd/nnet/small_cnn.hpp"

namespace ssd::testing {

using nnet::BlockConfig;
using nnet::SmallCnn;
using nnet::SmallCnnConfig;
using nnet::Tensor;
using nnet::cross_entropy;

template <typename T>
inline Tensor<T> random_batch(int n, int h, int w, int c, std::uint64_t seed) {
  Tensor<T> x({n, h, w, c});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-80.0, 0.0);
  for (auto& v : x.data) v = static_cast<T>(dist(rng));
  return x;
}

inline SmallCnnConfig tiny(int h, int w, std::vector<BlockConfig> blocks, int classes) {
  SmallCnnConfig c;
  c.input_shape = {h, w, 3};
  c.blocks = std::move(blocks);
  c.num_classes = classes;
  return c;
}

/// Central-difference oracle over every parameter. Entries whose +h/-h
/// evaluations land in a different ReLU/max-pool region are retried with
/// h = 1e-6 and skipped if that still crosses a kink. Returns {max relative error, checked, skipped}.
struct GradCheck {
  double max_rel = 0.0;
  int checked = 0;
  int skipped = 0;
};

inline GradCheck finite_difference_check(SmallCnn<double>& net, const Tensor<double>& x, const std::vector<int>& y,
                                  const std::vector<double>& w, double h = 1e-3) {
  SmallCnn<double>::Trace tr;
  const auto p = net.forward(x, &tr);
  Tensor<double> dl;
  cross_entropy(p, y, w, &dl);
  const auto grads = net.backward(tr, dl);
  const auto base_sig = tr.signature();

  GradCheck out;
  auto& params = net.parameters();
  for (std::size_t t = 0; t < params.size(); ++t) {
    for (std::size_t i = 0; i < params[t].size(); ++i) {
      const double saved = params[t][i];
      // Retry with a much smaller step when the first one crosses a kink.
      double lp = 0.0, lm = 0.0, step = 0.0;
      bool smooth = false;
      for (double hh : {h, 1e-6}) {
        SmallCnn<double>::Trace tp, tm;
        params[t][i] = saved + hh;
        lp = cross_entropy(net.forward(x, &tp), y, w);
        params[t][i] = saved - hh;
        lm = cross_entropy(net.forward(x, &tm), y, w);
        params[t][i] = saved;
        step = hh;
        if (tp.signature() == base_sig && tm.signature() == base_sig) {
          smooth = true;
          break;
        }
      }
      if (!smooth) {
        ++out.skipped;
        continue;
      }
      const double numeric = (lp - lm) / (2.0 * step);
      const double analytic = grads[t][i];
      const double rel = std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      out.max_rel = std::max(out.max_rel, rel);
      ++out.checked;
    }
  }
  return out;
}

struct GradCase {
  SmallCnnConfig config;
  Tensor<double> x;
  std::vector<int> labels;
  std::vector<double> weights;
};

/// Random small network, batch, labels and class weights.
inline GradCase random_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int classes = pick(0, 1) ? 4 : 2;
  std::vector<BlockConfig> blocks;
  const int depth = pick(1, 3);
  for (int b = 0; b < depth; ++b) blocks.push_back({pick(2, 5), pick(0, 3) == 0 ? 1 : 3, pick(1, 2), pick(0, 2) != 0});
  const int h = pick(6, 14), w = pick(6, 14);
  GradCase c;
  c.config = tiny(h, w, blocks, classes);
  try {
    c.config.validate();
  } catch (const Error&) {
    c.config.blocks.resize(1);
    c.config.blocks[0].pool = false;
  }
  const int n = pick(1, 3);
  for (int s = 0; s < n; ++s) c.labels.push_back(pick(0, classes - 1));
  for (int k = 0; k < classes; ++k) c.weights.push_back(0.5 + 0.25 * pick(0, 6));
  c.x = random_batch<double>(n, h, w, 3, seed + 100);
  return c;
}

}  // namespace ssd::testing

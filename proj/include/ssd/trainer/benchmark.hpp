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

#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssd/core/error.hpp"
#include "ssd/nnet/checkpoint.hpp"

namespace ssd::trainer {

inline constexpr int kLatencyReportVersion = 1;

struct LatencyReport {
  std::string model;
  double mean_ms = 0, std_ms = 0, min_ms = 0, max_ms = 0;
  int batch = 1;
  int warmup = 0;
  int iterations = 0;
  std::uint64_t checkpoint_bytes = 0;
  std::vector<double> samples_ms;
};

/// Single-input forward latency on random feature maps of the checkpoint's
/// input shape, timed with the steady clock after `warmup` untimed runs.
inline LatencyReport benchmark_latency(const nnet::Checkpoint& ckpt, int warmup, int iters, std::string name = {},
                                       std::uint64_t seed = 1) {
  require(iters >= 1, ErrorKind::Parameter, "need at least one timed iteration");
  require(warmup >= 0, ErrorKind::Parameter, "warmup must be non-negative");
  const auto model = ckpt.model();
  const auto& shape = ckpt.config.input_shape;
  nnet::Tensor<float> x({1, shape[0], shape[1], shape[2]});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> dist(-80.0f, 0.0f);
  for (auto& v : x.data) v = dist(rng);

  LatencyReport r;
  r.model = name.empty() ? ckpt.meta.experiment : std::move(name);
  r.warmup = warmup;
  r.iterations = iters;
  r.checkpoint_bytes = nnet::encode_checkpoint(ckpt).size();
  volatile float sink = 0.0f;
  for (int i = 0; i < warmup; ++i) sink = sink + model.forward(x)[0];
  for (int i = 0; i < iters; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    sink = sink + model.forward(x)[0];
    const auto t1 = std::chrono::steady_clock::now();
    r.samples_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  const double n = static_cast<double>(iters);
  r.mean_ms = std::accumulate(r.samples_ms.begin(), r.samples_ms.end(), 0.0) / n;
  double var = 0.0;
  for (double v : r.samples_ms) var += (v - r.mean_ms) * (v - r.mean_ms);
  r.std_ms = iters > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  r.min_ms = *std::min_element(r.samples_ms.begin(), r.samples_ms.end());
  r.max_ms = *std::max_element(r.samples_ms.begin(), r.samples_ms.end());
  return r;
}

inline nlohmann::json to_json(const std::vector<LatencyReport>& reports) {
  nlohmann::json models = nlohmann::json::array();
  for (const auto& r : reports) {
    models.push_back({{"model", r.model},
                      {"mean_ms", r.mean_ms},
                      {"std_ms", r.std_ms},
                      {"min_ms", r.min_ms},
                      {"max_ms", r.max_ms},
                      {"batch", r.batch},
                      {"warmup", r.warmup},
                      {"iterations", r.iterations},
                      {"checkpoint_bytes", r.checkpoint_bytes},
                      {"samples_ms", r.samples_ms}});
  }
  return {{"format", "ssd-latency-report"}, {"version", kLatencyReportVersion}, {"per_model", models}};
}

}  // namespace ssd::trainer

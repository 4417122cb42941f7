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

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssd/core/error.hpp"
#include "ssd/core/hash.hpp"

namespace ssd::nnet {

struct BlockConfig {
  int out_channels = 16;
  int kernel = 3;
  int stride = 1;
  bool pool = true;  // 2x2 max pool after the ReLU

  friend bool operator==(const BlockConfig&, const BlockConfig&) = default;
};

/// conv(kxk, same padding, stride) -> ReLU -> [2x2 max pool], repeated,
/// then global average pool -> dense(num_classes) -> softmax.
/// Inputs are shifted and scaled by (x - input_offset) / input_scale first.
struct SmallCnnConfig {
  std::array<int, 3> input_shape{128, 128, 3};  // [height = mel bins, width = frames, channels]
  std::vector<BlockConfig> blocks;
  int num_classes = 4;
  double input_offset = -40.0;
  double input_scale = 40.0;

  /// Default network: 16/32/64/128 channels; the first two convolutions
  /// have stride 2 so a 15-epoch run fits a CPU budget.
  static SmallCnnConfig standard(int frames, int num_classes, int width = 16) {
    SmallCnnConfig c;
    c.input_shape = {128, frames, 3};
    c.num_classes = num_classes;
    for (int i = 0; i < 4; ++i) c.blocks.push_back({width << i, 3, i < 2 ? 2 : 1, true});
    return c;
  }

  static int conv_out(int in, int kernel, int stride) { return (in + 2 * (kernel / 2) - kernel) / stride + 1; }

  /// [h, w, c] after every block.
  std::vector<std::array<int, 3>> block_shapes() const {
    std::vector<std::array<int, 3>> out;
    int h = input_shape[0], w = input_shape[1];
    for (const auto& b : blocks) {
      h = conv_out(h, b.kernel, b.stride);
      w = conv_out(w, b.kernel, b.stride);
      if (b.pool) h /= 2, w /= 2;
      out.push_back({h, w, b.out_channels});
    }
    return out;
  }

  int feature_channels() const { return blocks.empty() ? input_shape[2] : blocks.back().out_channels; }

  void validate() const {
    require(num_classes == 2 || num_classes == 4, ErrorKind::Config, "num_classes must be 2 or 4");
    require(input_shape[0] >= 1 && input_shape[1] >= 1 && input_shape[2] >= 1, ErrorKind::Config, "input shape");
    require(input_scale > 0.0, ErrorKind::Config, "input scale must be positive");
    int h = input_shape[0], w = input_shape[1];
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const auto& b = blocks[i];
      require(b.out_channels >= 1 && b.kernel >= 1 && b.kernel % 2 == 1 && b.stride >= 1, ErrorKind::Config,
              "block " + std::to_string(i) + ": bad conv parameters");
      h = conv_out(h, b.kernel, b.stride);
      w = conv_out(w, b.kernel, b.stride);
      if (b.pool) h /= 2, w /= 2;
      require(h >= 1 && w >= 1, ErrorKind::Config,
              "block " + std::to_string(i) + " shrinks the input below 1x1");
    }
  }

  /// Parameter names and shapes in canonical order.
  std::vector<std::pair<std::string, std::vector<int>>> parameter_inventory() const {
    std::vector<std::pair<std::string, std::vector<int>>> inv;
    int cin = input_shape[2];
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const auto& b = blocks[i];
      const auto prefix = "block" + std::to_string(i) + ".conv.";
      inv.push_back({prefix + "weight", {b.kernel, b.kernel, cin, b.out_channels}});
      inv.push_back({prefix + "bias", {b.out_channels}});
      cin = b.out_channels;
    }
    inv.push_back({"head.dense.weight", {cin, num_classes}});
    inv.push_back({"head.dense.bias", {num_classes}});
    return inv;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& [name, shape] : parameter_inventory()) {
      std::size_t m = 1;
      for (int d : shape) m *= static_cast<std::size_t>(d);
      n += m;
    }
    return n;
  }

  friend bool operator==(const SmallCnnConfig&, const SmallCnnConfig&) = default;
};

inline void to_json(nlohmann::json& j, const BlockConfig& b) {
  j = {{"out_channels", b.out_channels}, {"kernel", b.kernel}, {"stride", b.stride}, {"pool", b.pool}};
}

inline void from_json(const nlohmann::json& j, BlockConfig& b) {
  b.out_channels = j.at("out_channels");
  b.kernel = j.at("kernel");
  b.stride = j.at("stride");
  b.pool = j.at("pool");
}

inline void to_json(nlohmann::json& j, const SmallCnnConfig& c) {
  j = {{"input_shape", c.input_shape},   {"blocks", c.blocks},           {"num_classes", c.num_classes},
       {"input_offset", c.input_offset}, {"input_scale", c.input_scale}};
}

inline void from_json(const nlohmann::json& j, SmallCnnConfig& c) {
  c.input_shape = j.at("input_shape");
  c.blocks = j.at("blocks").get<std::vector<BlockConfig>>();
  c.num_classes = j.at("num_classes");
  c.input_offset = j.at("input_offset");
  c.input_scale = j.at("input_scale");
}

inline std::string config_hash(const SmallCnnConfig& c) {
  return hex64(Fnv1a().update(nlohmann::json(c).dump()).digest());
}

}  // namespace ssd::nnet

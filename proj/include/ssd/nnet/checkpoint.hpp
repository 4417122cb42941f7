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
#include <cstring>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssd/audio/wav.hpp"
#include "ssd/core/error.hpp"
#include "ssd/features/feature_io.hpp"
#include "ssd/nnet/config.hpp"
#include "ssd/nnet/small_cnn.hpp"

namespace ssd::nnet {

inline constexpr std::uint16_t kCheckpointVersion = 1;

struct TrainingMeta {
  std::string experiment;
  int fold = -1;
  int epoch = -1;
  double val_loss = 0.0;
  std::uint64_t seed = 0;
  std::string config_hash;

  friend bool operator==(const TrainingMeta&, const TrainingMeta&) = default;
};

inline void to_json(nlohmann::json& j, const TrainingMeta& m) {
  j = {{"experiment", m.experiment}, {"fold", m.fold}, {"epoch", m.epoch},
       {"val_loss", m.val_loss},     {"seed", m.seed}, {"config_hash", m.config_hash}};
}

inline void from_json(const nlohmann::json& j, TrainingMeta& m) {
  m.experiment = j.at("experiment");
  m.fold = j.at("fold");
  m.epoch = j.at("epoch");
  m.val_loss = j.at("val_loss");
  m.seed = j.at("seed");
  m.config_hash = j.at("config_hash");
}

/// Persisted model: config, named float tensors and training provenance.
struct Checkpoint {
  SmallCnnConfig config;
  std::vector<std::string> names;
  std::vector<Tensor<float>> weights;
  TrainingMeta meta;

  static Checkpoint from_model(const SmallCnn<float>& model, TrainingMeta meta = {}) {
    meta.config_hash = config_hash(model.config());
    return {model.config(), model.parameter_names(), model.parameters(), std::move(meta)};
  }

  SmallCnn<float> model() const { return SmallCnn<float>(config, weights); }

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

namespace ckpt_detail {

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) { audio::wav_detail::write_le(out, v); }
inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) { audio::wav_detail::write_le(out, v); }

struct Reader {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > bytes.size()) fail(ErrorKind::Parse, "checkpoint truncated");
  }
  std::uint32_t u(int width) {
    need(static_cast<std::size_t>(width));
    std::uint32_t v = 0;
    if (width == 1) v = bytes[pos];
    if (width == 2) v = audio::wav_detail::read_le<std::uint16_t>(bytes, pos);
    if (width == 4) v = audio::wav_detail::read_le<std::uint32_t>(bytes, pos);
    pos += static_cast<std::size_t>(width);
    return v;
  }
  std::string str(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes.data() + pos), n);
    pos += n;
    return s;
  }
};

}  // namespace ckpt_detail

/// "SSDM" | u16 version | u32 json length | json {config, meta} |
/// u32 tensor count | per tensor: u16 name length, name, u8 rank,
/// u32 dims[rank], f32 values (little-endian).
inline std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& c) {
  using namespace ckpt_detail;
  require(c.names.size() == c.weights.size(), ErrorKind::Shape, "checkpoint names and tensors differ in count");
  std::vector<std::uint8_t> out{'S', 'S', 'D', 'M'};
  put_u16(out, kCheckpointVersion);
  const auto doc = nlohmann::json{{"config", c.config}, {"meta", c.meta}}.dump();
  put_u32(out, static_cast<std::uint32_t>(doc.size()));
  out.insert(out.end(), doc.begin(), doc.end());
  put_u32(out, static_cast<std::uint32_t>(c.weights.size()));
  for (std::size_t i = 0; i < c.weights.size(); ++i) {
    put_u16(out, static_cast<std::uint16_t>(c.names[i].size()));
    out.insert(out.end(), c.names[i].begin(), c.names[i].end());
    out.push_back(static_cast<std::uint8_t>(c.weights[i].shape.size()));
    for (int d : c.weights[i].shape) put_u32(out, static_cast<std::uint32_t>(d));
    for (float v : c.weights[i].data) {
      std::uint32_t bits;
      std::memcpy(&bits, &v, 4);
      put_u32(out, bits);
    }
  }
  return out;
}

inline Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
  ckpt_detail::Reader r{bytes};
  if (r.str(4) != "SSDM") fail(ErrorKind::Parse, "not a checkpoint (bad magic)");
  const auto version = r.u(2);
  if (version != kCheckpointVersion) {
    fail(ErrorKind::UnsupportedFormat, "checkpoint version " + std::to_string(version) + " not supported");
  }
  Checkpoint c;
  try {
    const auto doc = nlohmann::json::parse(r.str(r.u(4)));
    c.config = doc.at("config").get<SmallCnnConfig>();
    c.meta = doc.at("meta").get<TrainingMeta>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("checkpoint header: ") + e.what());
  }
  const auto count = r.u(4);
  for (std::uint32_t i = 0; i < count; ++i) {
    c.names.push_back(r.str(r.u(2)));
    const auto rank = r.u(1);
    std::vector<int> shape;
    for (std::uint32_t d = 0; d < rank; ++d) shape.push_back(static_cast<int>(r.u(4)));
    Tensor<float> t(shape);
    r.need(t.size() * 4);
    for (auto& v : t.data) {
      const auto bits = r.u(4);
      std::memcpy(&v, &bits, 4);
    }
    c.weights.push_back(std::move(t));
  }
  if (r.pos != bytes.size()) fail(ErrorKind::Parse, "trailing bytes after checkpoint");
  const auto inv = c.config.parameter_inventory();
  require(inv.size() == c.names.size(), ErrorKind::Validation, "checkpoint tensor set does not match its config");
  for (std::size_t i = 0; i < inv.size(); ++i) {
    require(inv[i].first == c.names[i] && inv[i].second == c.weights[i].shape, ErrorKind::Validation,
            "checkpoint tensor " + c.names[i] + " does not match its config");
  }
  return c;
}

inline void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
  features::write_bytes(path, encode_checkpoint(c));
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(audio::read_file_bytes(path));
}

}  // namespace ssd::nnet

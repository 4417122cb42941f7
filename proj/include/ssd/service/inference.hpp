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
#include <filesystem>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ssd/audio/resample.hpp"
#include "ssd/audio/wav.hpp"
#include "ssd/core/hash.hpp"
#include "ssd/dataset/experiment.hpp"
#include "ssd/dataset/manifest.hpp"
#include "ssd/features/extract.hpp"
#include "ssd/nnet/checkpoint.hpp"

namespace ssd::service {

/// Probabilities for one uploaded phrase, plus the categories it flags.
struct Prediction {
  std::vector<std::string> classes;
  std::vector<double> probabilities;
  std::string predicted;
  std::map<std::string, double> category_probability;  // SSD category -> p
  std::vector<std::string> flagged;
  double latency_ms = 0.0;
};

/// An immutable loaded checkpoint. Swapping models replaces the shared
/// pointer; requests that already hold the old one finish on it.
class DeployedModel {
 public:
  DeployedModel(nnet::Checkpoint ckpt, std::string source)
      : ckpt_(std::move(ckpt)),
        net_(ckpt_.model()),
        experiment_(dataset::Experiment::parse(ckpt_.meta.experiment)),
        extractor_(features::FeatureConfig::for_preset(experiment_.preset())),
        source_(std::move(source)) {
    const auto& shape = ckpt_.config.input_shape;
    const auto& fc = extractor_.config();
    require(shape[1] == fc.target_frames && shape[2] == features::kChannels, ErrorKind::Validation,
            "checkpoint input shape does not fit the " + std::string(features::to_string(experiment_.preset())) +
                " preset");
    require(ckpt_.config.num_classes == experiment_.num_classes(), ErrorKind::Validation,
            "checkpoint class count does not match experiment " + experiment_.name());
    const auto bytes = nnet::encode_checkpoint(ckpt_);
    hash_ = hex64(Fnv1a().update(std::as_bytes(std::span(bytes))).digest());
    size_ = bytes.size();
  }

  static std::shared_ptr<const DeployedModel> load(const std::filesystem::path& path) {
    return std::make_shared<const DeployedModel>(nnet::load_checkpoint(path), path.string());
  }

  const nnet::Checkpoint& checkpoint() const { return ckpt_; }
  const dataset::Experiment& experiment() const { return experiment_; }
  const std::string& hash() const { return hash_; }

  nlohmann::json info() const {
    return {{"experiment", experiment_.name()},
            {"classes", experiment_.class_names()},
            {"preset", features::to_string(experiment_.preset())},
            {"input_shape", ckpt_.config.input_shape},
            {"config_hash", ckpt_.meta.config_hash},
            {"checkpoint_hash", hash_},
            {"checkpoint_bytes", size_},
            {"source", source_},
            {"meta", nlohmann::json(ckpt_.meta)}};
  }

  /// Decodes, checks the length limit, resamples, extracts and classifies.
  /// Undecodable or over-length audio raises a Decode/Validation-family error.
  Prediction predict_wav(std::span<const std::uint8_t> wav, const std::string& id) const {
    const auto t0 = std::chrono::steady_clock::now();
    auto clip = audio::decode_wav(wav);
    const double seconds = clip.duration_s();
    require(seconds < dataset::kMaxDurationS, ErrorKind::Validation,
            "recording is " + std::to_string(seconds) + " s; the limit is under 3 s");
    if (clip.sample_rate_hz() != extractor_.config().sample_rate_hz) {
      clip = audio::resample(clip, extractor_.config().sample_rate_hz);
    }
    const auto map = extractor_.extract(clip, id);
    nnet::Tensor<float> x({1, map.n_mels, map.frames, map.channels});
    x.data.assign(map.values.begin(), map.values.end());
    const auto p = net_.forward(x);

    Prediction out;
    out.classes = experiment_.class_names();
    const int k = ckpt_.config.num_classes;
    int best = 0;
    for (int c = 0; c < k; ++c) {
      out.probabilities.push_back(p[static_cast<std::size_t>(c)]);
      if (p[static_cast<std::size_t>(c)] > p[static_cast<std::size_t>(best)]) best = c;
    }
    out.predicted = out.classes[static_cast<std::size_t>(best)];
    if (experiment_.binary()) {
      // class 0 is "Incorrect" for the model's category
      const std::string cat(dataset::display_name(experiment_.category));
      out.category_probability[cat] = out.probabilities[0];
      if (best == 0) out.flagged.push_back(cat);
    } else {
      for (int c = 0; c < k; ++c) out.category_probability[out.classes[static_cast<std::size_t>(c)]] = out.probabilities[static_cast<std::size_t>(c)];
      out.flagged.push_back(out.predicted);
    }
    out.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
  }

 private:
  nnet::Checkpoint ckpt_;
  nnet::SmallCnn<float> net_;
  dataset::Experiment experiment_;
  features::FeatureExtractor extractor_;
  std::string source_;
  std::string hash_;
  std::size_t size_ = 0;
};

}  // namespace ssd::service

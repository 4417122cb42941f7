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

#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssd/audio/resample.hpp"
#include "ssd/audio/wav.hpp"
#include "ssd/augment/augment.hpp"
#include "ssd/core/error.hpp"
#include "ssd/core/hash.hpp"
#include "ssd/core/parallel.hpp"
#include "ssd/dataset/manifest.hpp"
#include "ssd/features/extract.hpp"
#include "ssd/features/feature_io.hpp"

namespace ssd::dataset {

using AudioSource = std::function<audio::AudioClip(const SpeechSample&)>;

/// Reads `root / audio_path` and resamples to the pipeline rate. A missing
/// file is a validation error naming the sample.
inline AudioSource wav_source(std::filesystem::path root) {
  return [root = std::move(root)](const SpeechSample& s) {
    const auto path = std::filesystem::path(s.audio_path).is_absolute() ? std::filesystem::path(s.audio_path)
                                                                        : root / s.audio_path;
    if (!std::filesystem::exists(path)) {
      fail(ErrorKind::Validation, "sample " + s.sample_id + ": audio file not found: " + path.string());
    }
    return audio::resample(audio::load_wav(path), audio::kPipelineRateHz);
  };
}

/// Cache of feature maps keyed by (sample_id, expansion variant), where
/// variant 0 is the untouched recording and 1..8 follow the expansion plan.
/// With a store directory the maps also persist as SSDF files together with
/// an index of content keys, so a rerun over unchanged audio and settings
/// recomputes nothing.
class FeatureCache {
 public:
  using MapPtr = std::shared_ptr<const features::FeatureMap>;

  FeatureCache(const features::FeatureConfig& config, AudioSource source, std::uint64_t master_seed,
               augment::AugmentParams params = {}, std::filesystem::path store = {})
      : extractor_(config),
        source_(std::move(source)),
        seed_(master_seed),
        params_(params),
        store_(std::move(store)) {
    if (!store_.empty()) load_index();
  }

  const features::FeatureExtractor& extractor() const { return extractor_; }
  std::size_t computed() const { return computed_; }
  std::size_t loaded() const { return loaded_; }

  /// Makes every requested (sample, variant) available; samples are processed
  /// in parallel, each loading its audio once.
  void prefetch(const std::vector<std::pair<const SpeechSample*, int>>& wanted, unsigned jobs) {
    std::map<std::string, std::pair<const SpeechSample*, std::set<int>>> by_sample;
    {
      std::lock_guard lock(mutex_);
      for (const auto& [s, v] : wanted) {
        require(v >= 0 && v < augment::kExpansionFactor, ErrorKind::Parameter, "variant out of range");
        if (maps_.count({s->sample_id, v})) continue;
        auto& slot = by_sample[s->sample_id];
        slot.first = s;
        slot.second.insert(v);
      }
    }
    std::vector<std::pair<const SpeechSample*, std::set<int>>> work;
    for (auto& [id, w] : by_sample) work.push_back(std::move(w));
    parallel_for(work.size(), jobs, [&](std::size_t i) { fill(*work[i].first, work[i].second); });
    flush_index();
  }

  MapPtr get(const SpeechSample& s, int variant) {
    {
      std::lock_guard lock(mutex_);
      const auto it = maps_.find({s.sample_id, variant});
      if (it != maps_.end()) return it->second;
    }
    fill(s, {variant});
    std::lock_guard lock(mutex_);
    return maps_.at({s.sample_id, variant});
  }

  /// Writes the store index; called after each prefetch.
  void flush_index() {
    if (store_.empty()) return;
    std::lock_guard lock(mutex_);
    if (!index_dirty_) return;
    nlohmann::json j;
    j["format"] = "ssd-feature-index";
    j["version"] = 1;
    j["config_hash"] = extractor_.config_hash();
    j["entries"] = index_;
    std::filesystem::create_directories(store_);
    const auto tmp = store_ / "index.json.tmp";
    {
      std::ofstream out(tmp);
      if (!out) fail(ErrorKind::Io, "cannot write " + tmp.string());
      out << j.dump(1) << '\n';
    }
    std::filesystem::rename(tmp, store_ / "index.json");
    index_dirty_ = false;
  }

  static std::string file_name(const std::string& sample_id, int variant) {
    std::string safe;
    for (char c : sample_id) safe += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return safe + "." + hex64(Fnv1a().update(sample_id).digest()).substr(0, 8) + ".v" + std::to_string(variant) +
           ".ssdf";
  }

 private:
  std::string content_key(const audio::AudioClip& clip, int variant) const {
    Fnv1a h;
    h.update(extractor_.config_hash());
    h.update_value(clip.sample_rate_hz());
    for (double x : clip.samples()) h.update_value(x);
    h.update_value(variant);
    if (variant > 0) {
      h.update_value(seed_);
      h.update_value(params_.pitch_semitones).update_value(params_.shift_fraction).update_value(params_.speed_spread);
      h.update_value(params_.gain_spread_db).update_value(params_.noise_snr_min_db).update_value(params_.noise_snr_max_db);
      const auto& c = params_.compressor;
      h.update_value(c.threshold_db).update_value(c.ratio).update_value(c.attack_ms).update_value(c.release_ms);
      h.update_value(c.rms_window_ms);
    }
    return hex64(h.digest());
  }

  void fill(const SpeechSample& s, const std::set<int>& variants) {
    const auto clip = source_(s);
    std::vector<std::pair<int, MapPtr>> made;
    for (int v : variants) {
      const auto key = content_key(clip, v);
      const auto name = file_name(s.sample_id, v);
      if (!store_.empty()) {
        bool hit = false;
        {
          std::lock_guard lock(mutex_);
          const auto it = index_.find(name);
          hit = it != index_.end() && it->second == key && std::filesystem::exists(store_ / name);
        }
        if (hit) {
          auto map = features::load_ssdf(store_ / name);
          map.sample_id = s.sample_id;
          map.config_hash = extractor_.config_hash();
          made.emplace_back(v, std::make_shared<const features::FeatureMap>(std::move(map)));
          std::lock_guard lock(mutex_);
          ++loaded_;
          continue;
        }
      }
      const auto variant_clip = augment::expansion_variant(clip, s.sample_id, seed_, v, params_);
      auto map = std::make_shared<const features::FeatureMap>(extractor_.extract(variant_clip, s.sample_id));
      if (!store_.empty()) {
        std::filesystem::create_directories(store_);
        features::save_ssdf(*map, store_ / name);
      }
      made.emplace_back(v, std::move(map));
      std::lock_guard lock(mutex_);
      ++computed_;
      if (!store_.empty()) {
        index_[name] = key;
        index_dirty_ = true;
      }
    }
    std::lock_guard lock(mutex_);
    for (auto& [v, map] : made) maps_[{s.sample_id, v}] = std::move(map);
  }

  void load_index() {
    const auto path = store_ / "index.json";
    if (!std::filesystem::exists(path)) return;
    std::ifstream in(path);
    try {
      const auto j = nlohmann::json::parse(in);
      if (j.at("config_hash") != extractor_.config_hash()) return;
      index_ = j.at("entries").get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Parse, "feature index " + path.string() + ": " + e.what());
    }
  }

  features::FeatureExtractor extractor_;
  AudioSource source_;
  std::uint64_t seed_;
  augment::AugmentParams params_;
  std::filesystem::path store_;

  std::mutex mutex_;
  std::map<std::pair<std::string, int>, MapPtr> maps_;
  std::map<std::string, std::string> index_;
  bool index_dirty_ = false;
  std::size_t computed_ = 0;
  std::size_t loaded_ = 0;
};

}  // namespace ssd::dataset

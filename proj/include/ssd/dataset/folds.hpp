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
#include <map>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssd/core/error.hpp"
#include "ssd/core/hash.hpp"
#include "ssd/dataset/manifest.hpp"

namespace ssd::dataset {

enum class Split { Train, Val };

/// Stratum a sample belongs to: its agreed label plus whether it is a phrase
/// or a single-character cut, so every experiment's subset is stratified.
inline std::string stratum(const SpeechSample& s) {
  return std::string(to_string(s.label())) + (s.is_character() ? "/character" : "/phrase");
}

/// k-fold assignment. Each sample has exactly one test fold. Within a fold,
/// the remaining samples are Train, except that a positive val_fraction moves
/// that share of each stratum into an inner Val split. With val_fraction 0
/// the held-out fold doubles as the validation set.
struct FoldPlan {
  static constexpr int kVersion = 1;

  int k = 5;
  std::uint64_t seed = 0;
  double val_fraction = 0.0;
  std::map<std::string, int> assignments;
  std::vector<std::map<std::string, Split>> train_val_split;  // per fold, non-test samples only

  int test_fold(const std::string& sample_id) const {
    const auto it = assignments.find(sample_id);
    require(it != assignments.end(), ErrorKind::Validation, "sample " + sample_id + " not in fold plan");
    return it->second;
  }

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// Stratified k-fold construction. Per stratum the samples are shuffled with
/// a stream keyed by (stratum, seed) and cut into k contiguous runs; when the
/// count does not divide evenly the extra samples go to the last folds.
inline FoldPlan build_folds(const std::vector<SpeechSample>& samples, int k, std::uint64_t seed,
                            double val_fraction = 0.0) {
  require(k >= 2, ErrorKind::Parameter, "k must be at least 2");
  require(val_fraction >= 0.0 && val_fraction < 1.0, ErrorKind::Parameter, "val fraction must be in [0, 1)");
  std::map<std::string, std::vector<std::string>> strata;
  for (const auto& s : samples) strata[stratum(s)].push_back(s.sample_id);

  FoldPlan plan;
  plan.k = k;
  plan.seed = seed;
  plan.val_fraction = val_fraction;
  plan.train_val_split.resize(static_cast<std::size_t>(k));

  for (auto& [key, ids] : strata) {
    const auto n = static_cast<int>(ids.size());
    if (n < k) {
      fail(ErrorKind::Infeasible,
           "class " + key + " has " + std::to_string(n) + " samples, fewer than k = " + std::to_string(k));
    }
    std::sort(ids.begin(), ids.end());
    std::mt19937_64 rng(keyed_seed(key, seed));
    std::shuffle(ids.begin(), ids.end(), rng);

    const int base = n / k, extra = n % k;
    std::vector<std::vector<std::string>> members(static_cast<std::size_t>(k));
    std::size_t cursor = 0;
    for (int f = 0; f < k; ++f) {
      const int size = base + (f >= k - extra ? 1 : 0);
      for (int i = 0; i < size; ++i) {
        plan.assignments[ids[cursor]] = f;
        members[static_cast<std::size_t>(f)].push_back(ids[cursor]);
        ++cursor;
      }
    }
    for (int f = 0; f < k; ++f) {
      std::vector<std::string> rest;
      for (int g = 0; g < k; ++g) {
        if (g != f) rest.insert(rest.end(), members[static_cast<std::size_t>(g)].begin(), members[static_cast<std::size_t>(g)].end());
      }
      const auto val_count = static_cast<std::size_t>(std::lround(val_fraction * static_cast<double>(rest.size())));
      auto& split = plan.train_val_split[static_cast<std::size_t>(f)];
      for (std::size_t i = 0; i < rest.size(); ++i) split[rest[i]] = i < val_count ? Split::Val : Split::Train;
    }
  }
  return plan;
}

inline nlohmann::json to_json(const FoldPlan& plan) {
  nlohmann::json j;
  j["format"] = "ssd-foldplan";
  j["version"] = FoldPlan::kVersion;
  j["k"] = plan.k;
  j["seed"] = plan.seed;
  j["val_fraction"] = plan.val_fraction;
  j["assignments"] = plan.assignments;
  auto& splits = j["train_val_split"] = nlohmann::json::array();
  for (const auto& fold : plan.train_val_split) {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [id, split] : fold) m[id] = split == Split::Train ? "train" : "val";
    splits.push_back(std::move(m));
  }
  return j;
}

inline FoldPlan fold_plan_from_json(const nlohmann::json& j) {
  try {
    require(j.at("format") == "ssd-foldplan", ErrorKind::Parse, "not a fold plan document");
    require(j.at("version") == FoldPlan::kVersion, ErrorKind::UnsupportedFormat, "fold plan version");
    FoldPlan plan;
    plan.k = j.at("k").get<int>();
    plan.seed = j.at("seed").get<std::uint64_t>();
    plan.val_fraction = j.at("val_fraction").get<double>();
    plan.assignments = j.at("assignments").get<std::map<std::string, int>>();
    for (const auto& fold : j.at("train_val_split")) {
      std::map<std::string, Split> m;
      for (const auto& [id, v] : fold.items()) m[id] = v == "train" ? Split::Train : Split::Val;
      plan.train_val_split.push_back(std::move(m));
    }
    require(static_cast<int>(plan.train_val_split.size()) == plan.k, ErrorKind::Parse, "fold count mismatch");
    return plan;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("fold plan: ") + e.what());
  }
}

}  // namespace ssd::dataset

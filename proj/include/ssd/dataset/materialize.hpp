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
#include <map>
#include <string>
#include <vector>

#include "ssd/augment/augment.hpp"
#include "ssd/core/error.hpp"
#include "ssd/dataset/class_weights.hpp"
#include "ssd/dataset/experiment.hpp"
#include "ssd/dataset/feature_cache.hpp"
#include "ssd/dataset/folds.hpp"

namespace ssd::dataset {

/// A labelled list of feature maps. `ids` name each segment as
/// "<sample_id>#<variant>" so its ancestry stays visible.
struct LabeledSet {
  std::vector<FeatureCache::MapPtr> maps;
  std::vector<int> labels;
  std::vector<std::string> ids;
  std::vector<std::string> ancestors;

  std::size_t size() const { return maps.size(); }
  bool empty() const { return maps.empty(); }

  std::vector<std::int64_t> class_counts(int classes) const {
    std::vector<std::int64_t> n(static_cast<std::size_t>(classes), 0);
    for (int y : labels) ++n[static_cast<std::size_t>(y)];
    return n;
  }
};

struct MaterializedFold {
  int fold = 0;
  int num_classes = 0;
  LabeledSet train, val, test;
  ClassWeights weights;
};

/// Which originals go where for one fold; no features involved. Train
/// originals are expanded 9x later, Val and Test never are.
struct FoldMembers {
  std::vector<const SpeechSample*> train, val, test;
};

inline FoldMembers fold_members(const FoldPlan& plan, int fold, const std::vector<SpeechSample>& samples) {
  require(fold >= 0 && fold < plan.k, ErrorKind::Parameter,
          "fold " + std::to_string(fold) + " outside [0, " + std::to_string(plan.k) + ")");
  FoldMembers m;
  const auto& split = plan.train_val_split[static_cast<std::size_t>(fold)];
  for (const auto& s : samples) {
    if (plan.test_fold(s.sample_id) == fold) {
      m.test.push_back(&s);
      if (plan.val_fraction == 0.0) m.val.push_back(&s);
      continue;
    }
    const auto it = split.find(s.sample_id);
    require(it != split.end(), ErrorKind::Validation, "sample " + s.sample_id + " missing from fold split");
    (it->second == Split::Train ? m.train : m.val).push_back(&s);
  }
  return m;
}

/// Per-class segment counts a fold would produce, without extracting
/// anything: {train (expanded), val, test}.
struct SegmentCounts {
  std::vector<std::int64_t> train, val, test;
};

inline SegmentCounts segment_counts(const FoldPlan& plan, int fold, const std::vector<SpeechSample>& samples,
                                    const Experiment& e) {
  const auto m = fold_members(plan, fold, samples);
  const auto n = static_cast<std::size_t>(e.num_classes());
  SegmentCounts c{std::vector<std::int64_t>(n), std::vector<std::int64_t>(n), std::vector<std::int64_t>(n)};
  for (auto* s : m.train) c.train[static_cast<std::size_t>(class_index(e, *s))] += augment::kExpansionFactor;
  for (auto* s : m.val) c.val[static_cast<std::size_t>(class_index(e, *s))] += 1;
  for (auto* s : m.test) c.test[static_cast<std::size_t>(class_index(e, *s))] += 1;
  return c;
}

/// Builds the train/val/test sets of one fold. `samples` must already be the
/// experiment's selection (see select_experiment) and `plan` built over them.
inline MaterializedFold materialize_experiment(const FoldPlan& plan, int fold, const std::vector<SpeechSample>& samples,
                                               const Experiment& e, FeatureCache& cache, unsigned jobs = 1) {
  const int want_frames = e.preset() == features::Preset::Phrase ? features::kPhraseFrames : features::kCharacterFrames;
  require(cache.extractor().config().target_frames == want_frames, ErrorKind::Validation,
          "experiment " + e.name() + " needs the " + std::string(features::to_string(e.preset())) + " preset");
  const auto members = fold_members(plan, fold, samples);

  std::vector<std::pair<const SpeechSample*, int>> wanted;
  for (auto* s : members.train) {
    for (int v = 0; v < augment::kExpansionFactor; ++v) wanted.emplace_back(s, v);
  }
  for (auto* s : members.val) wanted.emplace_back(s, 0);
  for (auto* s : members.test) wanted.emplace_back(s, 0);
  cache.prefetch(wanted, jobs);

  const auto add = [&](LabeledSet& set, const SpeechSample& s, int variant) {
    set.maps.push_back(cache.get(s, variant));
    set.labels.push_back(class_index(e, s));
    set.ids.push_back(s.sample_id + "#" + std::to_string(variant));
    set.ancestors.push_back(s.sample_id);
  };

  MaterializedFold out;
  out.fold = fold;
  out.num_classes = e.num_classes();
  for (auto* s : members.train) {
    for (int v = 0; v < augment::kExpansionFactor; ++v) add(out.train, *s, v);
  }
  for (auto* s : members.val) add(out.val, *s, 0);
  for (auto* s : members.test) add(out.test, *s, 0);
  require(!out.train.empty(), ErrorKind::Degenerate, "fold has no training samples");
  out.weights = compute_class_weights(out.train.class_counts(out.num_classes));
  return out;
}

/// Only the held-out test set of one fold (originals, no expansion).
inline LabeledSet materialize_test(const FoldPlan& plan, int fold, const std::vector<SpeechSample>& samples,
                                   const Experiment& e, FeatureCache& cache, unsigned jobs = 1) {
  const auto members = fold_members(plan, fold, samples);
  std::vector<std::pair<const SpeechSample*, int>> wanted;
  for (auto* s : members.test) wanted.emplace_back(s, 0);
  cache.prefetch(wanted, jobs);
  LabeledSet out;
  for (auto* s : members.test) {
    out.maps.push_back(cache.get(*s, 0));
    out.labels.push_back(class_index(e, *s));
    out.ids.push_back(s->sample_id + "#0");
    out.ancestors.push_back(s->sample_id);
  }
  return out;
}

}  // namespace ssd::dataset

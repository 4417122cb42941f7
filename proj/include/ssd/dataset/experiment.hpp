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

#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ssd/core/error.hpp"
#include "ssd/dataset/labels.hpp"
#include "ssd/dataset/manifest.hpp"
#include "ssd/features/extract.hpp"

namespace ssd::dataset {

enum class ExperimentKind { E1, E2, E3 };

/// E1: four-way error type on whole phrases.
/// E2: correct vs incorrect single characters for one error category.
/// E3: four-way error type on single characters.
struct Experiment {
  ExperimentKind kind = ExperimentKind::E1;
  ErrorCategory category = ErrorCategory::Stopping;  // E2 only

  static Experiment e1() { return {ExperimentKind::E1, ErrorCategory::Stopping}; }
  static Experiment e2(ErrorCategory c) { return {ExperimentKind::E2, c}; }
  static Experiment e3() { return {ExperimentKind::E3, ErrorCategory::Stopping}; }

  /// "e1", "e3", "e2:backing" (also "e2-backing").
  static Experiment parse(std::string_view text) {
    if (text == "e1" || text == "E1") return e1();
    if (text == "e3" || text == "E3") return e3();
    if (text.size() > 3 && (text[0] == 'e' || text[0] == 'E') && text[1] == '2' && (text[2] == ':' || text[2] == '-')) {
      return e2(parse_category(text.substr(3)));
    }
    fail(ErrorKind::Validation, "unknown experiment '" + std::string(text) + "' (want e1, e2:<category>, e3)");
  }

  std::string name() const {
    switch (kind) {
      case ExperimentKind::E1: return "e1";
      case ExperimentKind::E2: return "e2-" + std::string(to_string(category));
      case ExperimentKind::E3: return "e3";
    }
    return "?";
  }

  int num_classes() const { return kind == ExperimentKind::E2 ? 2 : 4; }

  std::vector<std::string> class_names() const {
    if (kind == ExperimentKind::E2) return {"Incorrect", "Correct"};
    std::vector<std::string> names;
    for (auto c : kAllCategories) names.emplace_back(display_name(c));
    return names;
  }

  features::Preset preset() const {
    return kind == ExperimentKind::E1 ? features::Preset::Phrase : features::Preset::Character;
  }

  bool binary() const { return kind == ExperimentKind::E2; }

  friend bool operator==(const Experiment&, const Experiment&) = default;
};

/// Class index of a sample already selected for the experiment.
inline int class_index(const Experiment& e, const SpeechSample& s) {
  if (e.kind == ExperimentKind::E2) {
    return s.label() == static_cast<SlpLabel>(e.category) ? static_cast<int>(BinaryLabel::Incorrect)
                                                          : static_cast<int>(BinaryLabel::Correct);
  }
  return static_cast<int>(s.label());
}

/// Character positions (phrase_id, char_index) where category `c` was
/// observed at least once. Correct cuts at these positions form the E2
/// negative class.
inline std::set<std::pair<std::string, int>> category_inventory(const std::vector<SpeechSample>& consistent,
                                                                 ErrorCategory c) {
  std::set<std::pair<std::string, int>> positions;
  for (const auto& s : consistent) {
    if (s.is_character() && s.label() == static_cast<SlpLabel>(c)) positions.emplace(s.phrase_id, *s.char_index);
  }
  return positions;
}

/// Consistency-filters `samples` and keeps the ones the experiment uses,
/// in input order.
inline std::vector<SpeechSample> select_experiment(const std::vector<SpeechSample>& samples, const Experiment& e) {
  const auto consistent = consistency_filter(samples);
  std::vector<SpeechSample> out;
  if (e.kind == ExperimentKind::E2) {
    const auto inventory = category_inventory(consistent, e.category);
    for (const auto& s : consistent) {
      if (!s.is_character()) continue;
      if (s.label() == static_cast<SlpLabel>(e.category) ||
          (s.label() == SlpLabel::Correct && inventory.count({s.phrase_id, *s.char_index}))) {
        out.push_back(s);
      }
    }
    return out;
  }
  const bool want_character = e.kind == ExperimentKind::E3;
  for (const auto& s : consistent) {
    if (s.is_character() == want_character && is_error(s.label())) out.push_back(s);
  }
  return out;
}

}  // namespace ssd::dataset

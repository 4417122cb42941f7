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
#include <optional>
#include <string>
#include <string_view>

#include "ssd/core/error.hpp"

namespace ssd::dataset {

/// The four articulation error types, in canonical class-index order.
enum class ErrorCategory { Stopping = 0, Backing = 1, Fcdp = 2, Affrication = 3 };

inline constexpr std::array<ErrorCategory, 4> kAllCategories = {ErrorCategory::Stopping, ErrorCategory::Backing,
                                                                ErrorCategory::Fcdp, ErrorCategory::Affrication};

/// One SLP annotation: an error category or "correct".
enum class SlpLabel { Stopping = 0, Backing = 1, Fcdp = 2, Affrication = 3, Correct = 4 };

enum class BinaryLabel { Incorrect = 0, Correct = 1 };

constexpr std::string_view to_string(SlpLabel l) {
  switch (l) {
    case SlpLabel::Stopping: return "stopping";
    case SlpLabel::Backing: return "backing";
    case SlpLabel::Fcdp: return "fcdp";
    case SlpLabel::Affrication: return "affrication";
    case SlpLabel::Correct: return "correct";
  }
  return "?";
}

constexpr std::string_view to_string(ErrorCategory c) { return to_string(static_cast<SlpLabel>(c)); }

constexpr std::string_view to_string(BinaryLabel b) { return b == BinaryLabel::Incorrect ? "incorrect" : "correct"; }

/// Display name used in reports ("FCDP", "Backing", ...).
constexpr std::string_view display_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Stopping: return "Stopping";
    case ErrorCategory::Backing: return "Backing";
    case ErrorCategory::Fcdp: return "FCDP";
    case ErrorCategory::Affrication: return "Affrication";
  }
  return "?";
}

inline std::optional<SlpLabel> parse_slp_label(std::string_view text) {
  for (int i = 0; i <= 4; ++i) {
    if (text == to_string(static_cast<SlpLabel>(i))) return static_cast<SlpLabel>(i);
  }
  return std::nullopt;
}

inline ErrorCategory parse_category(std::string_view text) {
  const auto label = parse_slp_label(text);
  if (!label || *label == SlpLabel::Correct) fail(ErrorKind::Validation, "unknown error category '" + std::string(text) + "'");
  return static_cast<ErrorCategory>(*label);
}

constexpr bool is_error(SlpLabel l) { return l != SlpLabel::Correct; }

constexpr ErrorCategory as_category(SlpLabel l) { return static_cast<ErrorCategory>(l); }

}  // namespace ssd::dataset

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
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ssd/core/error.hpp"
#include "ssd/dataset/labels.hpp"
#include "ssd/dataset/phrases.hpp"

namespace ssd::dataset {

inline constexpr double kMaxDurationS = 3.0;
inline constexpr std::string_view kManifestHeader =
    "sample_id,subject_id,age,sex,phrase_id,char_index,audio_path,slp1,slp2,duration_s";

struct SpeechSample {
  std::string sample_id;
  std::string subject_id;
  int subject_age = 0;
  char subject_sex = 'F';
  std::string phrase_id;
  std::optional<int> char_index;  // set for single-character cuts
  std::string audio_path;
  std::array<SlpLabel, 2> annotations{SlpLabel::Correct, SlpLabel::Correct};
  double duration_s = 0.0;

  bool consistent() const { return annotations[0] == annotations[1]; }
  /// The agreed label; only meaningful after consistency filtering.
  SlpLabel label() const { return annotations[0]; }
  bool is_character() const { return char_index.has_value(); }
};

namespace manifest_detail {

/// Splits one CSV record honouring double-quoted fields ("" escapes a quote).
inline std::vector<std::string> split_csv(std::string_view line, std::size_t row) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  if (quoted) fail(ErrorKind::Parse, "row " + std::to_string(row) + ": unterminated quote");
  return fields;
}

inline std::string quote_csv(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

template <typename T>
T parse_number(std::string_view text, std::size_t row, std::string_view column) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    fail(ErrorKind::Parse, "row " + std::to_string(row) + ": column " + std::string(column) + " is not a number: '" +
                               std::string(text) + "'");
  }
  return value;
}

}  // namespace manifest_detail

/// Parses manifest CSV text. Row numbers in errors count the header as row 1.
inline std::vector<SpeechSample> parse_manifest_text(std::string_view text) {
  using namespace manifest_detail;
  std::vector<SpeechSample> samples;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t row = 0;
  bool seen_header = false;
  std::set<std::string> ids;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (row == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != kManifestHeader) fail(ErrorKind::Parse, "row 1: expected header '" + std::string(kManifestHeader) + "'");
      seen_header = true;
      continue;
    }
    const auto f = split_csv(line, row);
    const auto where = "row " + std::to_string(row) + ": ";
    if (f.size() != 10) fail(ErrorKind::Parse, where + "expected 10 columns, got " + std::to_string(f.size()));

    SpeechSample s;
    s.sample_id = f[0];
    s.subject_id = f[1];
    if (s.sample_id.empty()) fail(ErrorKind::Parse, where + "empty sample_id");
    if (s.subject_id.empty()) fail(ErrorKind::Parse, where + "empty subject_id");
    if (!ids.insert(s.sample_id).second) fail(ErrorKind::Validation, where + "duplicate sample_id " + s.sample_id);
    s.subject_age = parse_number<int>(f[2], row, "age");
    if (f[3] != "F" && f[3] != "M") fail(ErrorKind::Parse, where + "sex must be F or M");
    s.subject_sex = f[3][0];
    s.phrase_id = f[4];
    if (!find_phrase(s.phrase_id)) fail(ErrorKind::Validation, where + "unknown phrase_id '" + s.phrase_id + "'");
    if (!f[5].empty()) {
      const int idx = parse_number<int>(f[5], row, "char_index");
      if (idx < 0 || idx >= find_phrase(s.phrase_id)->characters) {
        fail(ErrorKind::Validation, where + "char_index outside phrase " + s.phrase_id);
      }
      s.char_index = idx;
    }
    s.audio_path = f[6];
    if (s.audio_path.empty()) fail(ErrorKind::Parse, where + "empty audio_path");
    for (int a = 0; a < 2; ++a) {
      const auto& cell = f[7 + static_cast<std::size_t>(a)];
      if (cell.empty()) fail(ErrorKind::Parse, where + "missing annotation slp" + std::to_string(a + 1));
      const auto label = parse_slp_label(cell);
      if (!label) fail(ErrorKind::Parse, where + "unknown label '" + cell + "'");
      s.annotations[static_cast<std::size_t>(a)] = *label;
    }
    s.duration_s = parse_number<double>(f[9], row, "duration_s");
    if (!(s.duration_s > 0.0)) fail(ErrorKind::Validation, where + "duration must be positive");
    if (s.duration_s >= kMaxDurationS) {
      fail(ErrorKind::Validation, where + "duration " + f[9] + " s is not below the 3 s limit");
    }
    samples.push_back(std::move(s));
  }
  if (!seen_header && row > 0) fail(ErrorKind::Parse, "row 1: missing header");
  return samples;
}

inline std::vector<SpeechSample> parse_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open manifest " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_manifest_text(buffer.str());
}

inline std::string format_manifest(const std::vector<SpeechSample>& samples) {
  using manifest_detail::quote_csv;
  std::ostringstream out;
  out << kManifestHeader << '\n';
  for (const auto& s : samples) {
    out << quote_csv(s.sample_id) << ',' << quote_csv(s.subject_id) << ',' << s.subject_age << ',' << s.subject_sex
        << ',' << s.phrase_id << ',' << (s.char_index ? std::to_string(*s.char_index) : "") << ','
        << quote_csv(s.audio_path) << ',' << to_string(s.annotations[0]) << ',' << to_string(s.annotations[1]) << ',';
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, s.duration_s);
    out << std::string_view(buf, static_cast<std::size_t>(end - buf)) << '\n';
  }
  return out.str();
}

/// Keeps samples whose two annotations agree.
inline std::vector<SpeechSample> consistency_filter(const std::vector<SpeechSample>& samples) {
  std::vector<SpeechSample> kept;
  for (const auto& s : samples) {
    if (s.consistent()) kept.push_back(s);
  }
  return kept;
}

struct Demographics {
  int subjects = 0;
  int female = 0;
  int male = 0;
  std::map<int, std::array<int, 2>> by_age;  // age -> {female, male}
};

/// Per-subject summary; a subject's age and sex are taken from its first row.
inline Demographics summarize_subjects(const std::vector<SpeechSample>& samples) {
  Demographics d;
  std::set<std::string> seen;
  for (const auto& s : samples) {
    if (!seen.insert(s.subject_id).second) continue;
    ++d.subjects;
    const int sex = s.subject_sex == 'F' ? 0 : 1;
    (sex == 0 ? d.female : d.male) += 1;
    d.by_age[s.subject_age][static_cast<std::size_t>(sex)] += 1;
  }
  return d;
}

}  // namespace ssd::dataset

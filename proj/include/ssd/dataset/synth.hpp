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
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ssd/audio/audio_clip.hpp"
#include "ssd/audio/wav.hpp"
#include "ssd/core/error.hpp"
#include "ssd/core/hash.hpp"
#include "ssd/dataset/experiment.hpp"
#include "ssd/dataset/feature_cache.hpp"
#include "ssd/dataset/manifest.hpp"
#include "ssd/dataset/phrases.hpp"

namespace ssd::dataset {

/// Subject pool by age: {age, female, male}. 90 children, 34 F / 56 M.
inline constexpr std::array<std::array<int, 3>, 4> kSubjectTable = {{{3, 8, 14}, {4, 11, 18}, {5, 11, 20}, {6, 4, 4}}};

struct SynthSubject {
  std::string subject_id;
  int age;
  char sex;
};

inline std::vector<SynthSubject> synth_subjects() {
  std::vector<SynthSubject> out;
  for (const auto& [age, female, male] : kSubjectTable) {
    for (int i = 0; i < female + male; ++i) {
      out.push_back({"", age, i < female ? 'F' : 'M'});
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "C%02zu", i + 1);
    out[i].subject_id = buf;
  }
  return out;
}

/// Synthetic stand-in corpus. Each class is a harmonic voice whose spectrum
/// is shaped by one resonance; the resonance centre identifies the class.
/// With `center_jitter` the per-sample centre wanders (log2 units, normal)
/// so neighbouring classes can overlap.
struct SynthOptions {
  int classes = 4;                  // 4: error categories, 2: one category vs correct
  std::vector<int> per_class{100, 100, 100, 100};
  bool character_level = true;      // cut characters (char_index set) or whole phrases
  ErrorCategory binary_category = ErrorCategory::Backing;
  std::vector<double> centers_hz{400.0, 1000.0, 2400.0, 5600.0};
  double center_jitter = 0.08;
  double min_duration_s = 0.25;
  double max_duration_s = 0.45;
  double noise_level = 0.02;
  double disagreement = 0.0;        // extra samples whose two SLPs disagree
  std::uint64_t seed = 1;

  static SynthOptions separable(int per_class, bool character_level = true) {
    SynthOptions o;
    o.per_class.assign(4, per_class);
    o.character_level = character_level;
    if (!character_level) {
      o.min_duration_s = 0.8;
      o.max_duration_s = 1.6;
    }
    return o;
  }

  /// Minority "incorrect" vs majority "correct" with overlapping resonances.
  static SynthOptions imbalanced_binary(int minority, int majority) {
    SynthOptions o;
    o.classes = 2;
    o.per_class = {minority, majority};
    o.centers_hz = {1500.0, 2000.0};
    o.center_jitter = 0.16;
    return o;
  }

  void validate() const {
    require(classes == 2 || classes == 4, ErrorKind::Parameter, "synthetic corpus needs 2 or 4 classes");
    require(static_cast<int>(per_class.size()) == classes, ErrorKind::Parameter, "per-class count list size");
    require(static_cast<int>(centers_hz.size()) == classes, ErrorKind::Parameter, "centre list size");
    for (int n : per_class) require(n >= 0, ErrorKind::Parameter, "negative class count");
    require(min_duration_s > 0.05 && min_duration_s <= max_duration_s && max_duration_s < kMaxDurationS,
            ErrorKind::Parameter, "synthetic durations must lie in (0.05, 3) s");
    require(center_jitter >= 0.0 && noise_level >= 0.0 && noise_level < 0.5, ErrorKind::Parameter,
            "jitter and noise level must be non-negative");
    require(disagreement >= 0.0 && disagreement < 1.0, ErrorKind::Parameter, "disagreement fraction in [0, 1)");
  }
};

inline SlpLabel synth_label(const SynthOptions& o, int c) {
  if (o.classes == 4) return static_cast<SlpLabel>(c);
  return c == 0 ? static_cast<SlpLabel>(o.binary_category) : SlpLabel::Correct;
}

inline int synth_class(const SynthOptions& o, SlpLabel l) {
  if (o.classes == 4) return static_cast<int>(l);
  return l == SlpLabel::Correct ? 1 : 0;
}

/// Renders the audio for one manifest row. Depends only on the row's id,
/// first annotation, duration and the corpus options.
inline audio::AudioClip synth_clip(const SynthOptions& o, const SpeechSample& s) {
  const int c = synth_class(o, s.annotations[0]);
  std::mt19937_64 rng(keyed_seed(s.sample_id, o.seed ^ 0x5eedULL));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int rate = audio::kPipelineRateHz;
  const auto n = static_cast<std::size_t>(std::lround(s.duration_s * rate));
  const double f0 = 180.0 + 100.0 * unit(rng);
  const double center = o.centers_hz[static_cast<std::size_t>(c)] * std::exp2(o.center_jitter * normal(rng));
  const double width = 0.35;  // octaves
  const double vibrato = 0.02 * unit(rng);
  const double level = 0.25 + 0.25 * unit(rng);

  std::vector<double> x(n, 0.0);
  const int harmonics = static_cast<int>(std::min(16000.0, rate / 2.0 - 1.0) / f0);
  std::vector<double> amp(static_cast<std::size_t>(harmonics) + 1, 0.0), phase(amp.size(), 0.0);
  for (int h = 1; h <= harmonics; ++h) {
    const double d = std::log2(h * f0 / center) / width;
    amp[static_cast<std::size_t>(h)] = std::exp(-0.5 * d * d) + 0.02 / h;
    phase[static_cast<std::size_t>(h)] = 2.0 * std::numbers::pi * unit(rng);
  }
  double total = 0.0;
  for (double a : amp) total += a;
  double theta = 0.0;
  const double attack = 0.02 * rate, release = 0.05 * rate;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    theta += 2.0 * std::numbers::pi * f0 * (1.0 + vibrato * std::sin(2.0 * std::numbers::pi * 5.0 * t)) / rate;
    double v = 0.0;
    for (int h = 1; h <= harmonics; ++h) {
      const auto hi = static_cast<std::size_t>(h);
      if (amp[hi] > 1e-4) v += amp[hi] * std::sin(h * theta + phase[hi]);
    }
    const double env = std::min({1.0, static_cast<double>(i) / attack, static_cast<double>(n - 1 - i) / release});
    x[i] = level * env * v / total + o.noise_level * normal(rng);
  }
  return audio::AudioClip::clipped(std::move(x), rate, 16);
}

struct SynthCorpus {
  SynthOptions options;
  std::vector<SpeechSample> samples;

  audio::AudioClip clip(const SpeechSample& s) const { return synth_clip(options, s); }
  AudioSource source() const {
    return [opts = options](const SpeechSample& s) { return synth_clip(opts, s); };
  }
};

/// Builds the manifest rows. Subjects cycle through the 90-child pool; for a
/// binary corpus the correct cuts reuse positions where the error occurred.
inline SynthCorpus make_synth_corpus(const SynthOptions& o) {
  o.validate();
  SynthCorpus corpus{o, {}};
  const auto subjects = synth_subjects();
  std::mt19937_64 rng(keyed_seed("synth-corpus", o.seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_phrase(0, kPhrases.size() - 1);
  std::vector<std::pair<std::string, int>> error_positions;

  int serial = 0;
  const auto emit = [&](int c, bool disagree) {
    SpeechSample s;
    char id[16];
    std::snprintf(id, sizeof id, "S%05d", ++serial);
    s.sample_id = id;
    const auto& subject = subjects[static_cast<std::size_t>(serial - 1) % subjects.size()];
    s.subject_id = subject.subject_id;
    s.subject_age = subject.age;
    s.subject_sex = subject.sex;
    if (o.classes == 2 && c == 1 && o.character_level && !error_positions.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, error_positions.size() - 1);
      const auto& [phrase, index] = error_positions[pick(rng)];
      s.phrase_id = phrase;
      s.char_index = index;
    } else {
      const auto& p = kPhrases[pick_phrase(rng)];
      s.phrase_id = std::string(p.phrase_id);
      if (o.character_level) {
        s.char_index = static_cast<int>(unit(rng) * p.characters) % p.characters;
        if (c == 0) error_positions.emplace_back(s.phrase_id, *s.char_index);
      }
    }
    s.audio_path = "audio/" + s.sample_id + ".wav";
    const auto label = synth_label(o, c);
    s.annotations = {label, label};
    if (disagree) {
      const int other = (c + 1) % o.classes;
      s.annotations[1] = synth_label(o, other);
    }
    const double raw = o.min_duration_s + (o.max_duration_s - o.min_duration_s) * unit(rng);
    s.duration_s = std::round(raw * audio::kPipelineRateHz) / audio::kPipelineRateHz;
    corpus.samples.push_back(std::move(s));
  };

  for (int c = 0; c < o.classes; ++c) {
    for (int i = 0; i < o.per_class[static_cast<std::size_t>(c)]; ++i) emit(c, false);
  }
  int total = 0;
  for (int n : o.per_class) total += n;
  const int extra = static_cast<int>(std::lround(o.disagreement * total));
  for (int i = 0; i < extra; ++i) emit(i % o.classes, true);
  return corpus;
}

/// Writes `manifest.csv` and `audio/*.wav` (16-bit) under `dir`.
inline void write_synth_corpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "audio");
  for (const auto& s : corpus.samples) audio::save_wav(corpus.clip(s), dir / s.audio_path, 16);
  std::ofstream out(dir / "manifest.csv", std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + (dir / "manifest.csv").string());
  out << format_manifest(corpus.samples);
}

}  // namespace ssd::dataset

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

// End-to-end acceptance checks. One PASS/FAIL line per criterion; the exit
// status is non-zero if any line fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ssd/augment/augment.hpp"
#include "ssd/core/allocator.hpp"
#include "ssd/dataset/class_weights.hpp"
#include "ssd/dataset/folds.hpp"
#include "ssd/dataset/materialize.hpp"
#include "ssd/dataset/synth.hpp"
#include "ssd/features/extract.hpp"
#include "ssd/features/mel.hpp"
#include "ssd/trainer/benchmark.hpp"
#include "ssd/trainer/cross_validate.hpp"

#include "../gradcheck.hpp"
#include "../test_support.hpp"

namespace {

using namespace ssd;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ------------------------------------------------------------ expansion

Outcome expansion_arithmetic() {
  const auto t0 = Clock::now();
  std::vector<dataset::SpeechSample> samples;
  for (int i = 0; i < 611; ++i) {
    dataset::SpeechSample s;
    s.sample_id = fmt("F%04d", i);
    s.subject_id = "C01";
    s.subject_age = 4;
    s.subject_sex = 'F';
    s.phrase_id = "P01";
    s.audio_path = s.sample_id + ".wav";
    s.annotations = {dataset::SlpLabel::Fcdp, dataset::SlpLabel::Fcdp};
    s.duration_s = 1.0;
    samples.push_back(s);
  }
  const auto e = dataset::Experiment::e1();
  const auto plan = dataset::build_folds(samples, 5, 2024);
  bool ok = true;
  std::string detail = "train/test per fold:";
  for (int f = 0; f < plan.k; ++f) {
    const auto c = dataset::segment_counts(plan, f, samples, e);
    const auto train = c.train[static_cast<std::size_t>(dataset::ErrorCategory::Fcdp)];
    const auto test = c.test[static_cast<std::size_t>(dataset::ErrorCategory::Fcdp)];
    ok = ok && train == 4401 && (test == 122 || test == 123);
    detail += fmt(" %lld/%lld", static_cast<long long>(train), static_cast<long long>(test));
  }
  const double secs = seconds_since(t0);
  ok = ok && secs < 60.0;
  detail += fmt("; want 4401 with 122/123 (611 = 4*122 + 123 forces 488*9 = 4392 on the 123 fold); %.2f s", secs);
  return {ok, detail};
}

// ------------------------------------------------------------ class weights

Outcome class_weights() {
  const std::vector<std::int64_t> counts{4401, 2628, 1332, 9936};
  const std::vector<double> listed{1.0394, 1.7405, 3.4340, 0.4603};
  const auto w = dataset::compute_class_weights(counts);
  long double total = 0;
  for (auto n : counts) total += n;
  bool ok = w.size() == 4;
  std::string detail = "got";
  double worst_formula = 0.0, worst_listed = 0.0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    const double oracle = static_cast<double>(total / (4.0L * counts[c]));
    worst_formula = std::max(worst_formula, std::abs(w[c] - oracle));
    worst_listed = std::max(worst_listed, std::abs(w[c] - listed[c]));
    ok = ok && std::abs(w[c] - listed[c]) <= 1e-4;
    detail += fmt(" %.5f(vs %.4f)", w[c], listed[c]);
  }
  ok = ok && worst_formula < 1e-12;
  detail += fmt("; |w - N/(K n_c)| max %.1e; |w - listed| max %.2e, tolerance 1e-4", worst_formula, worst_listed);
  return {ok, detail};
}

// ------------------------------------------------------------ confusion arithmetic

trainer::EvalResult evaluate_table(const std::vector<std::vector<int>>& table) {
  const int k = static_cast<int>(table.size());
  std::vector<int> targets;
  std::vector<float> rows;
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      for (int i = 0; i < table[r][c]; ++i) {
        for (int j = 0; j < k; ++j) rows.push_back(j == r ? 0.7f : 0.3f / (k - 1));
        targets.push_back(c);
      }
    }
  }
  nnet::Tensor<float> probs({static_cast<int>(targets.size()), k});
  probs.data.assign(rows.begin(), rows.end());
  return trainer::evaluate_probabilities(probs, targets);
}

Outcome confusion_arithmetic() {
  const auto phrase = evaluate_table({{120, 0, 0, 2}, {4, 65, 0, 4}, {7, 2, 20, 8}, {8, 3, 3, 262}});
  const auto character = evaluate_table({{19, 3, 5, 5}, {7, 27, 11, 3}, {1, 10, 65, 2}, {2, 0, 7, 22}});
  const double a = phrase.accuracy, b = character.accuracy;
  const bool ok = std::abs(a - 467.0 / 508.0) <= 1e-9 && std::abs(b - 133.0 / 189.0) <= 1e-9 &&
                  phrase.confusion.total() == 508 && character.confusion.total() == 189;
  return {ok, fmt("4-class phrase matrix %.10f (467/508 = %.10f); character matrix %.10f (133/189 = %.10f)", a,
                  467.0 / 508.0, b, 133.0 / 189.0)};
}

// ------------------------------------------------------------ fold average

Outcome fold_average() {
  trainer::EvalReport r;
  r.experiment = "e1";
  const double acc[] = {69.0, 72.1, 72.4, 64.8, 71.1};
  for (int f = 0; f < 5; ++f) {
    trainer::FoldReport fr;
    fr.fold = f;
    fr.accuracy = acc[f] / 100.0;
    r.per_fold.push_back(fr);
  }
  r.finalize();
  const auto shown = trainer::one_decimal(100.0 * r.summary.mean);
  return {shown == "69.9" && r.per_fold.size() == 5, fmt("mean %.4f -> \"%s\" (want 69.9)", 100.0 * r.summary.mean, shown.c_str())};
}

// ------------------------------------------------------------ DSP oracles

Outcome dsp_oracles() {
  namespace st = ssd::testing;
  const auto t0 = Clock::now();
  const int rate = audio::kPipelineRateHz;
  bool ok = true;
  std::string detail;

  const double mel = features::hz_to_mel(1000.0);
  ok = ok && std::abs(mel - 1000.0) <= 0.01;
  detail += fmt("mel(1000)=%.4f", mel);

  const audio::AudioClip tone(st::sine(440.0, 0.5, rate, static_cast<std::size_t>(rate)), rate);
  for (double semis : {2.0, -2.0}) {
    const double want = 440.0 * std::pow(2.0, semis / 12.0);
    const auto shifted = augment::pitch_shift(tone, semis);
    const double peak = st::dominant_frequency(shifted.samples(), rate, 300.0, 600.0, 0.25);
    ok = ok && std::abs(peak - want) <= 0.01 * want;
    detail += fmt("; pitch %+g st peak %.2f Hz (want %.2f)", semis, peak, want);
  }

  // quiet enough that 0 dB noise never reaches the clip limit
  const audio::AudioClip soft(st::sine(440.0, 0.1, rate, static_cast<std::size_t>(rate)), rate);
  double worst_snr = 0.0;
  for (double target : {0.0, 5.0, 10.0, 20.0}) {
    const auto noisy = augment::add_noise_snr(soft, target, 7);
    std::vector<double> noise(soft.size());
    for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = noisy.samples()[i] - soft.samples()[i];
    const double measured = 10.0 * std::log10(audio::mean_power(soft.samples()) / audio::mean_power(noise));
    worst_snr = std::max(worst_snr, std::abs(measured - target));
  }
  ok = ok && worst_snr <= 0.1;
  detail += fmt("; SNR error max %.4f dB", worst_snr);

  double worst_gain = 0.0;
  for (double g : {-12.0, -3.0, 0.0, 3.0}) {
    const double want = st::rms(tone.samples()) * std::pow(10.0, g / 20.0);
    worst_gain = std::max(worst_gain, std::abs(st::rms(augment::apply_gain(tone, g).samples()) - want) / want);
  }
  ok = ok && worst_gain <= 1e-3;
  detail += fmt("; gain RMS rel error max %.1e", worst_gain);

  long worst_len = 0;
  for (double factor : {0.75, 0.9, 1.1, 1.25}) {
    const auto out = augment::speed_scale(tone, factor);
    const long want = std::lround(static_cast<double>(tone.size()) / factor);
    worst_len = std::max(worst_len, std::abs(static_cast<long>(out.size()) - want));
  }
  ok = ok && worst_len <= 1;
  detail += fmt("; speed length off by <= %ld", worst_len);

  const double secs = seconds_since(t0);
  ok = ok && secs < 60.0;
  detail += fmt("; %.1f s", secs);
  return {ok, detail};
}

// ------------------------------------------------------------ gradient oracle

Outcome gradient_oracle() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int checked = 0, skipped = 0;
  const int seeds = 8;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const auto c = ssd::testing::random_case(seed);
    nnet::SmallCnn<double> net(c.config, seed);
    const auto r = ssd::testing::finite_difference_check(net, c.x, c.labels, c.weights);
    worst = std::max(worst, r.max_rel);
    checked += r.checked;
    skipped += r.skipped;
  }
  const double secs = seconds_since(t0);
  const bool ok = worst < 1e-4 && checked > 0 && secs < 120.0;
  return {ok, fmt("%d random configs, %d entries checked (%d at ReLU/pool kinks skipped), max rel error %.2e; %.1f s",
                  seeds, checked, skipped, worst, secs)};
}

// ------------------------------------------------------------ learnability and determinism

struct FourClassRun {
  trainer::EvalReport report;
  double seconds = 0.0;
};

// default master seed, as an unconfigured `ssd train` would use
constexpr std::uint64_t kSeed = 1;

FourClassRun four_class_cv(unsigned jobs) {
  const auto t0 = Clock::now();
  const auto corpus = dataset::make_synth_corpus(dataset::SynthOptions::separable(100));
  const auto e = dataset::Experiment::e3();
  const auto samples = dataset::select_experiment(corpus.samples, e);
  const auto plan = dataset::build_folds(samples, 5, kSeed);
  dataset::FeatureCache cache(features::FeatureConfig::for_preset(e.preset()), corpus.source(), kSeed);
  const auto cfg = trainer::TrainConfig::for_experiment(e, kSeed);
  const auto cv =
      trainer::cross_validate(plan, samples, cache, cfg, nnet::SmallCnnConfig::standard(features::kCharacterFrames, 4), jobs);
  return {cv.report, seconds_since(t0)};
}

struct BinaryRun {
  double weighted_recall = 0.0, unweighted_recall = 0.0;
  std::int64_t minority_test = 0;  // pooled over the evaluated folds
  double seconds = 0.0;
};

BinaryRun binary_imbalanced() {
  const auto t0 = Clock::now();
  const auto corpus = dataset::make_synth_corpus(dataset::SynthOptions::imbalanced_binary(40, 360));
  const auto e = dataset::Experiment::e2(dataset::ErrorCategory::Backing);
  const auto samples = dataset::select_experiment(corpus.samples, e);
  const auto plan = dataset::build_folds(samples, 5, kSeed);
  dataset::FeatureCache cache(features::FeatureConfig::for_preset(e.preset()), corpus.source(), kSeed);
  const auto model = nnet::SmallCnnConfig::standard(features::kCharacterFrames, 2);
  BinaryRun out;
  for (bool weighted : {true, false}) {
    auto cfg = trainer::TrainConfig::for_experiment(e, kSeed);
    cfg.class_weights = weighted;
    // two folds: 8 minority test samples per fold is too coarse on its own
    const auto cv = trainer::cross_validate(plan, samples, cache, cfg, model, 1, {0, 1});
    std::int64_t hit = 0, total = 0;
    for (const auto& f : cv.report.per_fold) {
      hit += f.confusion.counts[0][0];
      total += f.confusion.counts[0][0] + f.confusion.counts[1][0];
    }
    (weighted ? out.weighted_recall : out.unweighted_recall) = total ? static_cast<double>(hit) / total : 0.0;
    out.minority_test = total;
  }
  out.seconds = seconds_since(t0);
  return out;
}

}  // namespace

int main() {
  tune_allocator();
  int failures = 0;
  const auto line = [&](const char* name, const Outcome& o) {
    std::printf("%s %-22s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };
  const auto guarded = [&](const char* name, const std::function<Outcome()>& f) {
    try {
      line(name, f());
    } catch (const std::exception& e) {
      line(name, {false, std::string("threw: ") + e.what()});
    }
  };

  guarded("expansion-arithmetic", expansion_arithmetic);
  guarded("class-weights", class_weights);
  guarded("confusion-arithmetic", confusion_arithmetic);
  guarded("fold-average", fold_average);
  guarded("dsp-oracles", dsp_oracles);
  guarded("gradient-oracle", gradient_oracle);
  guarded("feature-shapes", [] {
    bool ok = true;
    std::string detail;
    for (auto preset : {features::Preset::Phrase, features::Preset::Character}) {
      const features::FeatureExtractor fx(features::FeatureConfig::for_preset(preset));
      const int want = preset == features::Preset::Phrase ? 256 : 128;
      for (double secs : {0.12, 0.7, 2.95}) {
        const auto n = static_cast<std::size_t>(secs * audio::kPipelineRateHz);
        const auto m = fx.extract(audio::AudioClip(ssd::testing::sine(700.0, 0.4, audio::kPipelineRateHz, n), audio::kPipelineRateHz), "t");
        ok = ok && m.n_mels == 128 && m.frames == want && m.channels == 3 && m.values.size() == 128u * want * 3;
      }
      const auto quiet = fx.extract(audio::AudioClip(std::vector<double>(audio::kPipelineRateHz, 0.0), audio::kPipelineRateHz), "s");
      for (float v : quiet.values) ok = ok && std::isfinite(v) && v == quiet.floor_db;
      detail += fmt("%s [128,%d,3] for 0.12/0.7/2.95 s, silence all %.0f dB; ", std::string(features::to_string(preset)).c_str(),
                    want, static_cast<double>(quiet.floor_db));
    }
    return Outcome{ok, detail};
  });
  guarded("benchmark-sanity", [] {
    nnet::TrainingMeta meta;
    meta.experiment = "e3";
    const auto narrow = nnet::Checkpoint::from_model(nnet::SmallCnn<float>(nnet::SmallCnnConfig::standard(128, 4, 16), 1), meta);
    const auto wide = nnet::Checkpoint::from_model(nnet::SmallCnn<float>(nnet::SmallCnnConfig::standard(128, 4, 32), 1), meta);
    const auto a = trainer::benchmark_latency(narrow, 10, 100, "w16");
    const auto b = trainer::benchmark_latency(wide, 10, 100, "w32");
    const bool ok = a.samples_ms.size() >= 50 && a.warmup >= 10 && b.samples_ms.size() >= 50 && b.mean_ms > a.mean_ms &&
                    a.checkpoint_bytes == nnet::encode_checkpoint(narrow).size() && b.checkpoint_bytes > a.checkpoint_bytes &&
                    a.min_ms > 0.0;
    return Outcome{ok, fmt("width 16: %.3f ms (%zu timed, %d warmup, %llu bytes); width 32: %.3f ms (%llu bytes)", a.mean_ms,
                           a.samples_ms.size(), a.warmup, static_cast<unsigned long long>(a.checkpoint_bytes), b.mean_ms,
                           static_cast<unsigned long long>(b.checkpoint_bytes))};
  });

  FourClassRun first;
  guarded("learnability", [&] {
    first = four_class_cv(1);
    const auto bin = binary_imbalanced();
    bool ok = true;
    std::string detail = "4-class fold accuracy";
    for (const auto& f : first.report.per_fold) {
      ok = ok && f.accuracy >= 0.95;
      detail += fmt(" %.3f", f.accuracy);
    }
    ok = ok && first.report.per_fold.size() == 5;
    ok = ok && bin.weighted_recall >= 0.8 && bin.weighted_recall > bin.unweighted_recall;
    const double secs = first.seconds + bin.seconds;
    ok = ok && secs < 15.0 * 60.0;
    detail += fmt("; 9:1 binary minority recall weighted %.3f vs unweighted %.3f (%lld minority test samples, folds 1-2); %.0f s",
                  bin.weighted_recall, bin.unweighted_recall, static_cast<long long>(bin.minority_test), secs);
    return Outcome{ok, detail};
  });
  guarded("determinism", [&] {
    require(!first.report.per_fold.empty(), ErrorKind::Precondition, "learnability run did not finish");
    const auto second = four_class_cv(2);
    const auto a = trainer::to_json(first.report).dump();
    const auto b = trainer::to_json(second.report).dump();
    return Outcome{a == b, fmt("report bytes %zu (jobs 1) vs %zu (jobs 2), %s; rerun %.0f s", a.size(), b.size(),
                               a == b ? "identical" : "different", second.seconds)};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

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

// ssd: command-line front end for the screening pipeline.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ssd/core/allocator.hpp"
#include "ssd/dataset/feature_cache.hpp"
#include "ssd/dataset/folds.hpp"
#include "ssd/dataset/manifest.hpp"
#include "ssd/dataset/materialize.hpp"
#include "ssd/dataset/synth.hpp"
#include "ssd/features/feature_io.hpp"
#include "ssd/trainer/benchmark.hpp"
#include "ssd/trainer/cross_validate.hpp"

// after Eigen, see server.hpp
#include "ssd/service/server.hpp"

#include <CLI11.hpp>

namespace fs = std::filesystem;
using namespace ssd;

namespace {

enum Exit { kOk = 0, kIo = 1, kInvalid = 2, kNumeric = 3 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Io: return kIo;
    case ErrorKind::Numeric: return kNumeric;
    default: return kInvalid;
  }
}

struct Common {
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  bool quiet = false;
};

struct AugmentOpts {
  augment::AugmentParams p;
  void add(CLI::App* sub) {
    sub->add_option("--pitch-semitones", p.pitch_semitones, "Pitch shift for the up/down variants")->capture_default_str();
    sub->add_option("--shift-fraction", p.shift_fraction, "Time shift as a fraction of the clip")->capture_default_str();
    sub->add_option("--speed-spread", p.speed_spread, "Speed factor drawn from 1 +/- spread")->capture_default_str();
    sub->add_option("--gain-spread-db", p.gain_spread_db, "Gain drawn from +/- spread dB")->capture_default_str();
    sub->add_option("--snr-min-db", p.noise_snr_min_db, "Lowest noise SNR")->capture_default_str();
    sub->add_option("--snr-max-db", p.noise_snr_max_db, "Highest noise SNR")->capture_default_str();
    sub->add_option("--comp-threshold-db", p.compressor.threshold_db, "Compressor threshold")->capture_default_str();
    sub->add_option("--comp-ratio", p.compressor.ratio, "Compressor ratio")->capture_default_str();
    sub->add_option("--comp-attack-ms", p.compressor.attack_ms, "Compressor attack")->capture_default_str();
    sub->add_option("--comp-release-ms", p.compressor.release_ms, "Compressor release")->capture_default_str();
    sub->add_option("--comp-window-ms", p.compressor.rms_window_ms, "Compressor RMS detector time constant")
        ->capture_default_str();
  }
};

// Manifest plus where its audio lives.
struct Corpus {
  fs::path manifest;
  fs::path audio_root;
  std::vector<dataset::SpeechSample> samples;

  void add(CLI::App* sub) {
    sub->add_option("--manifest", manifest, "Manifest CSV")->required();
    sub->add_option("--audio-root", audio_root, "Directory audio_path is relative to (default: manifest directory)");
  }
  void load() {
    samples = dataset::parse_manifest(manifest);
    if (audio_root.empty()) audio_root = manifest.parent_path();
  }
};

void log(const Common& c, const std::string& line) {
  if (!c.quiet) std::cerr << line << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + path.string());
  out << text;
  require(static_cast<bool>(out), ErrorKind::Io, "short write to " + path.string());
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot read " + path.string());
  auto j = nlohmann::json::parse(in, nullptr, false);
  require(!j.is_discarded(), ErrorKind::Parse, path.string() + " is not valid JSON");
  return j;
}

// Records how a run was configured next to its outputs.
void log_resolved(const CLI::App& app, const CLI::App& sub, const Common& c, const fs::path& dir) {
  std::ostringstream out;
  out << "# resolved configuration of `ssd " << sub.get_name() << "`\n";
  out << "seed = " << c.seed << "\njobs = " << c.jobs << "\n";
  out << "[" << sub.get_name() << "]\n" << sub.config_to_str(true, false);
  (void)app;
  write_text(dir / ("run-" + sub.get_name() + ".toml"), out.str());
}

std::string counts_line(const std::vector<std::int64_t>& v) {
  std::string s;
  for (auto n : v) s += (s.empty() ? "" : " ") + std::to_string(n);
  return s;
}

// ---------------------------------------------------------------- synth

struct SynthCmd {
  fs::path out;
  int classes = 4;
  std::vector<int> per_class{100};
  bool phrases = false;
  std::string category = "backing";
  double jitter = -1.0;
  double noise = 0.02;
  double disagreement = 0.0;

  void add(CLI::App* sub) {
    sub->add_option("--out", out, "Output directory (manifest.csv and audio/)")->required();
    sub->add_option("--classes", classes, "4 error categories, or 2 (category vs correct)")
        ->check(CLI::IsMember({2, 4}))
        ->capture_default_str();
    sub->add_option("--per-class", per_class, "Samples per class; one value or one per class")->delimiter(',');
    sub->add_flag("--phrases", phrases, "Whole phrases (0.8-1.6 s) instead of single characters");
    sub->add_option("--category", category, "Error category of a binary corpus")->capture_default_str();
    sub->add_option("--jitter", jitter, "Resonance spread in octaves; negative keeps the corpus default")
        ->capture_default_str();
    sub->add_option("--noise", noise, "Background noise level")->capture_default_str();
    sub->add_option("--disagreement", disagreement, "Extra fraction of rows where the two raters disagree")
        ->capture_default_str();
  }

  int run(const Common& c) {
    auto o = classes == 2 ? dataset::SynthOptions::imbalanced_binary(1, 1) : dataset::SynthOptions{};
    if (phrases) {
      const auto ph = dataset::SynthOptions::separable(1, false);
      o.character_level = false;
      o.min_duration_s = ph.min_duration_s;
      o.max_duration_s = ph.max_duration_s;
    }
    if (per_class.size() == 1) per_class.assign(static_cast<std::size_t>(classes), per_class[0]);
    require(static_cast<int>(per_class.size()) == classes, ErrorKind::Parameter,
            "--per-class needs 1 or " + std::to_string(classes) + " values");
    o.per_class = per_class;
    o.binary_category = dataset::parse_category(category);
    if (jitter >= 0.0) o.center_jitter = jitter;
    o.noise_level = noise;
    o.disagreement = disagreement;
    o.seed = c.seed;
    const auto corpus = dataset::make_synth_corpus(o);
    dataset::write_synth_corpus(corpus, out);
    std::cout << "wrote " << corpus.samples.size() << " samples to " << (out / "manifest.csv").string() << '\n';
    return kOk;
  }
};

// ---------------------------------------------------------------- extract

struct ExtractCmd {
  Corpus corpus;
  AugmentOpts aug;
  fs::path out;
  std::string preset = "phrase";
  int variants = augment::kExpansionFactor;
  bool npy = false;

  void add(CLI::App* sub) {
    corpus.add(sub);
    aug.add(sub);
    sub->add_option("--out", out, "Feature store directory")->required();
    sub->add_option("--preset", preset, "phrase [128,256,3] or character [128,128,3]")
        ->check(CLI::IsMember({"phrase", "character"}))
        ->capture_default_str();
    sub->add_option("--variants", variants, "1 = originals only, 9 = originals and all eight augmentations")
        ->check(CLI::Range(1, augment::kExpansionFactor))
        ->capture_default_str();
    sub->add_flag("--npy", npy, "Also export the original maps as .npy under <out>/npy");
  }

  int run(const Common& c) {
    corpus.load();
    const auto cfg = features::FeatureConfig::for_preset(features::parse_preset(preset));
    dataset::FeatureCache cache(cfg, dataset::wav_source(corpus.audio_root), c.seed, aug.p, out);
    std::vector<std::pair<const dataset::SpeechSample*, int>> wanted;
    for (const auto& s : corpus.samples) {
      for (int v = 0; v < variants; ++v) wanted.emplace_back(&s, v);
    }
    cache.prefetch(wanted, c.jobs);
    if (npy) {
      fs::create_directories(out / "npy");
      for (const auto& s : corpus.samples) features::save_npy(*cache.get(s, 0), out / "npy" / (s.sample_id + ".npy"));
    }
    const auto& m = *cache.get(corpus.samples.front(), 0);
    std::cout << "extracted " << wanted.size() << " maps [" << m.n_mels << "," << m.frames << "," << m.channels
              << "]: computed " << cache.computed() << ", reused " << cache.loaded() << '\n';
    return kOk;
  }
};

// ---------------------------------------------------------------- fold

struct PlanOpts {
  std::string experiment = "e1";
  int k = 5;
  double val_fraction = 0.0;
  fs::path plan;

  void add(CLI::App* sub, bool plan_is_input) {
    sub->add_option("--experiment", experiment, "e1, e2:<category> or e3")->capture_default_str();
    sub->add_option("--k", k, "Number of folds")->capture_default_str();
    sub->add_option("--val-fraction", val_fraction,
                    "Share of each training fold held out for checkpoint selection (0: use the test fold)")
        ->capture_default_str();
    if (plan_is_input) sub->add_option("--plan", plan, "Existing fold plan JSON (default: build one from the seed)");
  }

  dataset::FoldPlan resolve(const std::vector<dataset::SpeechSample>& selected, std::uint64_t seed) const {
    if (!plan.empty()) return dataset::fold_plan_from_json(read_json(plan));
    return dataset::build_folds(selected, k, seed, val_fraction);
  }
};

struct FoldCmd {
  Corpus corpus;
  PlanOpts plan;
  fs::path out;

  void add(CLI::App* sub) {
    corpus.add(sub);
    plan.add(sub, false);
    sub->add_option("--out", out, "Fold plan JSON to write")->required();
  }

  int run(const Common& c) {
    corpus.load();
    const auto e = dataset::Experiment::parse(plan.experiment);
    const auto selected = dataset::select_experiment(corpus.samples, e);
    const auto p = plan.resolve(selected, c.seed);
    write_text(out, dataset::to_json(p).dump(2) + "\n");
    std::cout << "experiment " << e.name() << ": " << selected.size() << " samples, classes";
    for (const auto& n : e.class_names()) std::cout << ' ' << n;
    std::cout << "\nfold  train(x9)  val  test\n";
    for (int f = 0; f < p.k; ++f) {
      const auto n = dataset::segment_counts(p, f, selected, e);
      std::cout << f + 1 << "  [" << counts_line(n.train) << "]  [" << counts_line(n.val) << "]  [" << counts_line(n.test)
                << "]\n";
    }
    return kOk;
  }
};

// ---------------------------------------------------------------- train / eval

struct ModelOpts {
  int width = 16;
  void add(CLI::App* sub) {
    sub->add_option("--width", width, "Channels of the first block (doubles per block)")->capture_default_str();
  }
  nnet::SmallCnnConfig config(const dataset::Experiment& e) const {
    const int frames = e.preset() == features::Preset::Phrase ? features::kPhraseFrames : features::kCharacterFrames;
    return nnet::SmallCnnConfig::standard(frames, e.num_classes(), width);
  }
};

std::string fold_stem(const dataset::Experiment& e, int fold) { return e.name() + "-fold" + std::to_string(fold + 1); }

struct TrainCmd {
  Corpus corpus;
  AugmentOpts aug;
  PlanOpts plan;
  ModelOpts model;
  fs::path out, features_dir;
  int fold = 0;  // 1-based; 0 = all
  int epochs = 15, batch_size = 128;
  double lr = 1e-4;
  bool no_weights = false;

  void add(CLI::App* sub) {
    corpus.add(sub);
    aug.add(sub);
    plan.add(sub, true);
    model.add(sub);
    sub->add_option("--out", out, "Run directory (checkpoints/, reports/)")->required();
    sub->add_option("--features", features_dir, "Feature store (default: <out>/features/<preset>)");
    sub->add_option("--fold", fold, "Train one fold (1-based); omit for all folds")->check(CLI::NonNegativeNumber);
    sub->add_option("--epochs", epochs, "Training epochs")->capture_default_str();
    sub->add_option("--batch-size", batch_size, "Mini-batch size")->capture_default_str();
    sub->add_option("--lr", lr, "Adam learning rate")->capture_default_str();
    sub->add_flag("--no-class-weights", no_weights, "Train with uniform class weights");
  }

  int run(const Common& c) {
    corpus.load();
    const auto e = dataset::Experiment::parse(plan.experiment);
    auto cfg = trainer::TrainConfig::for_experiment(e, c.seed);
    cfg.epochs = epochs;
    cfg.batch_size = batch_size;
    cfg.lr = lr;
    cfg.class_weights = !no_weights;
    cfg.validate();
    const auto mcfg = model.config(e);
    mcfg.validate();
    const auto selected = dataset::select_experiment(corpus.samples, e);
    const auto p = plan.resolve(selected, c.seed);
    require(fold <= p.k, ErrorKind::Parameter, "--fold " + std::to_string(fold) + " but the plan has " + std::to_string(p.k));
    write_text(out / ("folds-" + e.name() + ".json"), dataset::to_json(p).dump(2) + "\n");

    const auto fcfg = features::FeatureConfig::for_preset(e.preset());
    const auto store = features_dir.empty() ? out / "features" / std::string(features::to_string(e.preset())) : features_dir;
    dataset::FeatureCache cache(fcfg, dataset::wav_source(corpus.audio_root), c.seed, aug.p, store);

    std::vector<int> folds;
    if (fold > 0) {
      folds.push_back(fold - 1);
    } else {
      for (int f = 0; f < p.k; ++f) folds.push_back(f);
    }
    log(c, "training " + e.name() + " on " + std::to_string(selected.size()) + " samples, " +
               std::to_string(folds.size()) + " fold(s)");
    const auto cv = trainer::cross_validate(p, selected, cache, cfg, mcfg, c.jobs, folds);
    fs::create_directories(out / "checkpoints");
    for (std::size_t i = 0; i < folds.size(); ++i) {
      const auto stem = fold_stem(e, folds[i]);
      nnet::save_checkpoint(cv.checkpoints[i], out / "checkpoints" / (stem + ".ssdm"));
      auto single = cv.report;
      single.per_fold = {cv.report.per_fold[i]};
      single.finalize();
      write_text(out / "reports" / (stem + ".json"), trainer::to_json(single).dump(2) + "\n");
    }
    write_text(out / "reports" / (e.name() + "-train.json"), trainer::to_json(cv.report).dump(2) + "\n");
    std::cout << trainer::format_table(cv.report);
    return kOk;
  }
};

struct EvalCmd {
  Corpus corpus;
  fs::path run_dir;
  std::string experiment = "e1";
  bool all_folds = false;
  int fold = 0;

  void add(CLI::App* sub) {
    corpus.add(sub);
    sub->add_option("--run", run_dir, "Run directory written by `ssd train`")->required();
    sub->add_option("--experiment", experiment, "e1, e2:<category> or e3")->capture_default_str();
    auto* all = sub->add_flag("--all-folds", all_folds, "Evaluate every fold's checkpoint");
    auto* one = sub->add_option("--fold", fold, "Evaluate one fold (1-based)")->check(CLI::PositiveNumber);
    all->excludes(one);
  }

  int run(const Common& c) {
    require(all_folds || fold > 0, ErrorKind::Parameter, "pass --all-folds or --fold N");
    corpus.load();
    const auto e = dataset::Experiment::parse(experiment);
    const auto selected = dataset::select_experiment(corpus.samples, e);
    const auto p = dataset::fold_plan_from_json(read_json(run_dir / ("folds-" + e.name() + ".json")));
    std::vector<int> folds;
    if (all_folds) {
      for (int f = 0; f < p.k; ++f) folds.push_back(f);
    } else {
      require(fold <= p.k, ErrorKind::Parameter, "fold outside the plan");
      folds.push_back(fold - 1);
    }
    const auto fcfg = features::FeatureConfig::for_preset(e.preset());
    dataset::FeatureCache cache(fcfg, dataset::wav_source(corpus.audio_root), c.seed, {},
                                run_dir / "features" / std::string(features::to_string(e.preset())));

    trainer::EvalReport report;
    report.experiment = e.name();
    report.class_names = e.class_names();
    report.seed = c.seed;
    for (int f : folds) {
      const auto stem = fold_stem(e, f);
      const auto ckpt = nnet::load_checkpoint(run_dir / "checkpoints" / (stem + ".ssdm"));
      const auto trained = trainer::eval_report_from_json(read_json(run_dir / "reports" / (stem + ".json")));
      require(trained.per_fold.size() == 1 && trained.per_fold[0].fold == f, ErrorKind::Validation,
              "fold report " + stem + " does not describe fold " + std::to_string(f + 1));
      report.seed = trained.seed;
      report.model_config_hash = trained.model_config_hash;
      report.train_config = trained.train_config;
      const auto test = dataset::materialize_test(p, f, selected, e, cache, c.jobs);
      const auto r = trainer::evaluate(ckpt, test);
      auto fr = trained.per_fold[0];
      fr.confusion = r.confusion;
      fr.accuracy = r.accuracy;
      report.per_fold.push_back(std::move(fr));
      write_text(run_dir / "reports" / (stem + "-confusion.csv"), trainer::confusion_csv(r.confusion, e.class_names()));
    }
    report.finalize();
    write_text(run_dir / "reports" / (e.name() + (all_folds ? "-eval.json" : "-fold" + std::to_string(fold) + "-eval.json")),
               trainer::to_json(report).dump(2) + "\n");
    std::cout << trainer::format_table(report);
    return kOk;
  }
};

// ---------------------------------------------------------------- bench

struct BenchCmd {
  std::vector<fs::path> checkpoints;
  std::string experiment = "e1";
  std::vector<int> widths{16};
  int warmup = 10, iters = 50;
  fs::path out;

  void add(CLI::App* sub) {
    sub->add_option("--checkpoint", checkpoints, "Checkpoint(s) to time; without one, untrained default models");
    sub->add_option("--experiment", experiment, "Experiment of the untrained models")->capture_default_str();
    sub->add_option("--width", widths, "First-block widths of the untrained models")->delimiter(',');
    sub->add_option("--warmup", warmup, "Untimed runs")->check(CLI::NonNegativeNumber)->capture_default_str();
    sub->add_option("--iters", iters, "Timed runs")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--out", out, "Latency report JSON");
  }

  int run(const Common& c) {
    std::vector<trainer::LatencyReport> reports;
    for (const auto& path : checkpoints) {
      reports.push_back(trainer::benchmark_latency(nnet::load_checkpoint(path), warmup, iters, path.filename().string(), c.seed));
    }
    if (checkpoints.empty()) {
      const auto e = dataset::Experiment::parse(experiment);
      for (int w : widths) {
        ModelOpts m{w};
        nnet::TrainingMeta meta;
        meta.experiment = e.name();
        const auto ckpt = nnet::Checkpoint::from_model(nnet::SmallCnn<float>(m.config(e), c.seed), meta);
        reports.push_back(trainer::benchmark_latency(ckpt, warmup, iters, e.name() + "-w" + std::to_string(w), c.seed));
      }
    }
    std::printf("%-24s %10s %9s %9s %9s %12s\n", "model", "mean_ms", "std_ms", "min_ms", "max_ms", "ckpt_bytes");
    for (const auto& r : reports) {
      std::printf("%-24s %10.3f %9.3f %9.3f %9.3f %12llu\n", r.model.c_str(), r.mean_ms, r.std_ms, r.min_ms, r.max_ms,
                  static_cast<unsigned long long>(r.checkpoint_bytes));
    }
    if (!out.empty()) write_text(out, trainer::to_json(reports).dump(2) + "\n");
    return kOk;
  }
};

// ---------------------------------------------------------------- serve

struct ServeCmd {
  std::string host = "127.0.0.1";
  int port = 8080;
  fs::path checkpoint, data_dir, static_dir;
  std::string admin_token;

  void add(CLI::App* sub) {
    sub->add_option("--host", host, "Listen address")->capture_default_str();
    sub->add_option("--port", port, "Listen port")->capture_default_str();
    sub->add_option("--checkpoint", checkpoint, "Model to deploy at start-up");
    sub->add_option("--data-dir", data_dir, "Session log and donated audio");
    sub->add_option("--static-dir", static_dir, "UI bundle served at /");
    sub->add_option("--admin-token", admin_token, "Token for POST /admin/model (default: loopback only)");
  }

  int run(const Common& c) {
    service::ServiceOptions o;
    o.data_dir = data_dir;
    o.static_dir = static_dir;
    o.admin_token = admin_token;
    if (!checkpoint.empty()) o.checkpoint = checkpoint;
    service::ScreeningService svc(o);
    httplib::Server srv;
    svc.install(srv);
    log(c, "listening on http://" + host + ":" + std::to_string(port));
    if (!srv.listen(host, port)) fail(ErrorKind::Io, "cannot listen on " + host + ":" + std::to_string(port));
    return kOk;
  }
};

bool seed_on_command_line(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--seed" || a.rfind("--seed=", 0) == 0) return true;
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  tune_allocator();
  CLI::App app{"Speech sound disorder screening pipeline"};
  app.set_config("--config", "", "TOML file with option values; command-line flags win");
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--seed", common.seed, "Master seed (SSD_SEED overrides the config file)")->capture_default_str();
  app.add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_flag("--quiet", common.quiet, "No progress output");

  SynthCmd synth;
  ExtractCmd extract;
  FoldCmd fold;
  TrainCmd train;
  EvalCmd eval;
  BenchCmd bench;
  ServeCmd serve;
  auto* s_synth = app.add_subcommand("synth", "Generate a synthetic corpus with the manifest layout");
  auto* s_extract = app.add_subcommand("extract", "Extract feature maps into a content-addressed store");
  auto* s_fold = app.add_subcommand("fold", "Build a stratified k-fold plan");
  auto* s_train = app.add_subcommand("train", "Train one fold or all folds");
  auto* s_eval = app.add_subcommand("eval", "Evaluate trained checkpoints on their test folds");
  auto* s_bench = app.add_subcommand("bench", "Single-input inference latency");
  auto* s_serve = app.add_subcommand("serve", "Run the HTTP screening service");
  synth.add(s_synth);
  extract.add(s_extract);
  fold.add(s_fold);
  train.add(s_train);
  eval.add(s_eval);
  bench.add(s_bench);
  serve.add(s_serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  if (const char* env = std::getenv("SSD_SEED"); env && !seed_on_command_line(argc, argv)) {
    try {
      std::size_t used = 0;
      common.seed = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
    } catch (const std::exception&) {
      std::cerr << "error: SSD_SEED must be an unsigned integer\n";
      return kInvalid;
    }
  }

  try {
    if (s_synth->parsed()) {
      log_resolved(app, *s_synth, common, synth.out);
      return synth.run(common);
    }
    if (s_extract->parsed()) {
      log_resolved(app, *s_extract, common, extract.out);
      return extract.run(common);
    }
    if (s_fold->parsed()) return fold.run(common);
    if (s_train->parsed()) {
      log_resolved(app, *s_train, common, train.out);
      return train.run(common);
    }
    if (s_eval->parsed()) return eval.run(common);
    if (s_bench->parsed()) return bench.run(common);
    if (s_serve->parsed()) return serve.run(common);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}

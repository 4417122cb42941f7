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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ssd/dataset/manifest.hpp"
#include "ssd/features/feature_io.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int rc = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("ssd_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs the CLI inside the work directory; `env` is prefixed verbatim.
Run cli(const std::string& args, const std::string& env = "") {
  const auto out = workdir() / "stdout.txt", err = workdir() / "stderr.txt";
  const std::string cmd = "cd '" + workdir().string() + "' && " + env + " '" SSD_CLI_PATH "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST(Cli, SynthFourHundred) {
  const auto r = cli("synth --classes 4 --per-class 100 --out synth400");
  ASSERT_EQ(r.rc, 0) << r.err;
  const auto rows = ssd::dataset::parse_manifest(workdir() / "synth400" / "manifest.csv");
  EXPECT_EQ(rows.size(), 400u);
  for (const auto& s : rows) EXPECT_TRUE(fs::exists(workdir() / "synth400" / s.audio_path));
  EXPECT_NE(slurp(workdir() / "synth400" / "run-synth.toml").find("seed = 1"), std::string::npos);
}

TEST(Cli, ExtractIsIdempotent) {
  ASSERT_EQ(cli("synth --phrases --per-class 2,3,2,3 --out phr").rc, 0);
  const auto first = cli("extract --manifest phr/manifest.csv --preset phrase --variants 1 --out phr_feat --npy");
  ASSERT_EQ(first.rc, 0) << first.err;
  EXPECT_NE(first.out.find("extracted 10 maps [128,256,3]: computed 10, reused 0"), std::string::npos) << first.out;
  const auto again = cli("extract --manifest phr/manifest.csv --preset phrase --variants 1 --out phr_feat");
  ASSERT_EQ(again.rc, 0);
  EXPECT_NE(again.out.find("computed 0, reused 10"), std::string::npos) << again.out;
  EXPECT_TRUE(fs::exists(workdir() / "phr_feat" / "npy" / "S00001.npy"));
  int maps = 0;
  for (const auto& e : fs::directory_iterator(workdir() / "phr_feat")) {
    if (e.path().extension() == ".ssdf") {
      const auto m = ssd::features::load_ssdf(e.path());
      EXPECT_EQ(m.n_mels, 128);
      EXPECT_EQ(m.frames, 256);
      EXPECT_EQ(m.channels, 3);
      ++maps;
    }
  }
  EXPECT_EQ(maps, 10);
}

TEST(Cli, ExitCodes) {
  ASSERT_EQ(cli("synth --per-class 2 --out gap").rc, 0);
  fs::remove(workdir() / "gap" / "audio" / "S00003.wav");
  const auto missing = cli("extract --manifest gap/manifest.csv --preset character --variants 1 --out gap_feat");
  EXPECT_EQ(missing.rc, 2);
  EXPECT_NE(missing.err.find("S00003"), std::string::npos) << missing.err;

  EXPECT_EQ(cli("extract --manifest nowhere.csv --out x").rc, 1);
  EXPECT_EQ(cli("synth --out y --no-such-flag").rc, 2);
  EXPECT_EQ(cli("synth --out y --classes 3").rc, 2);
  EXPECT_EQ(cli("").rc, 2);
  EXPECT_EQ(cli("--help").rc, 0);
  EXPECT_EQ(cli("fold --manifest gap/manifest.csv --experiment e9 --out p.json").rc, 2);
}

TEST(Cli, SeedSources) {
  ASSERT_EQ(cli("synth --per-class 2 --out seed_flag --seed 5").rc, 0);
  ASSERT_EQ(cli("synth --per-class 2 --out seed_env", "SSD_SEED=5").rc, 0);
  ASSERT_EQ(cli("synth --per-class 2 --out seed_default").rc, 0);
  const auto flag = slurp(workdir() / "seed_flag" / "manifest.csv");
  EXPECT_EQ(flag, slurp(workdir() / "seed_env" / "manifest.csv"));
  EXPECT_NE(flag, slurp(workdir() / "seed_default" / "manifest.csv"));
  EXPECT_NE(slurp(workdir() / "seed_env" / "run-synth.toml").find("seed = 5"), std::string::npos);

  std::ofstream(workdir() / "cfg.toml") << "seed = 9\n[synth]\nper-class = 3\n";
  ASSERT_EQ(cli("--config cfg.toml synth --out from_cfg").rc, 0);
  EXPECT_EQ(ssd::dataset::parse_manifest(workdir() / "from_cfg" / "manifest.csv").size(), 12u);
  EXPECT_NE(slurp(workdir() / "from_cfg" / "run-synth.toml").find("seed = 9"), std::string::npos);
  ASSERT_EQ(cli("--config cfg.toml synth --out env_over_cfg", "SSD_SEED=5").rc, 0);
  EXPECT_NE(slurp(workdir() / "env_over_cfg" / "run-synth.toml").find("seed = 5"), std::string::npos);
  ASSERT_EQ(cli("--config cfg.toml synth --out flag_over_cfg --per-class 1").rc, 0);
  EXPECT_EQ(ssd::dataset::parse_manifest(workdir() / "flag_over_cfg" / "manifest.csv").size(), 4u);
}

TEST(Cli, TrainEvalBench) {
  ASSERT_EQ(cli("synth --per-class 5 --out tiny").rc, 0);
  const auto fold = cli("fold --manifest tiny/manifest.csv --experiment e3 --out tiny_plan.json");
  ASSERT_EQ(fold.rc, 0) << fold.err;
  EXPECT_NE(fold.out.find("1  [36 36 36 36]  [1 1 1 1]  [1 1 1 1]"), std::string::npos) << fold.out;

  const std::string common = "--manifest tiny/manifest.csv --experiment e3 --epochs 2 --width 4 --quiet";
  auto one = cli("train " + common + " --out tiny_one --fold 2");
  ASSERT_EQ(one.rc, 0) << one.err;
  int ckpts = 0;
  for (const auto& e : fs::directory_iterator(workdir() / "tiny_one" / "checkpoints")) ckpts += e.path().extension() == ".ssdm";
  EXPECT_EQ(ckpts, 1);
  EXPECT_TRUE(fs::exists(workdir() / "tiny_one" / "checkpoints" / "e3-fold2.ssdm"));
  EXPECT_TRUE(fs::exists(workdir() / "tiny_one" / "reports" / "e3-fold2.json"));

  ASSERT_EQ(cli("train " + common + " --out tiny_all --plan tiny_plan.json --jobs 2").rc, 0);
  const auto ev = cli("eval --manifest tiny/manifest.csv --experiment e3 --run tiny_all --all-folds");
  ASSERT_EQ(ev.rc, 0) << ev.err;
  const auto report = nlohmann::json::parse(slurp(workdir() / "tiny_all" / "reports" / "e3-eval.json"));
  ASSERT_EQ(report["per_fold"].size(), 5u);
  double sum = 0.0;
  for (const auto& f : report["per_fold"]) sum += f["accuracy"].get<double>();
  EXPECT_NEAR(report["summary"]["mean"].get<double>(), sum / 5.0, 1e-12);
  const auto trained = nlohmann::json::parse(slurp(workdir() / "tiny_all" / "reports" / "e3-train.json"));
  EXPECT_EQ(trained["per_fold"], report["per_fold"]);
  EXPECT_TRUE(fs::exists(workdir() / "tiny_all" / "reports" / "e3-fold1-confusion.csv"));

  const auto bench = cli("bench --checkpoint tiny_all/checkpoints/e3-fold1.ssdm --warmup 10 --iters 50 --out lat.json");
  ASSERT_EQ(bench.rc, 0) << bench.err;
  const auto lat = nlohmann::json::parse(slurp(workdir() / "lat.json"));
  EXPECT_EQ(lat["per_model"][0]["iterations"], 50);
  EXPECT_EQ(lat["per_model"][0]["samples_ms"].size(), 50u);
  EXPECT_EQ(lat["per_model"][0]["checkpoint_bytes"].get<std::uintmax_t>(),
            fs::file_size(workdir() / "tiny_all" / "checkpoints" / "e3-fold1.ssdm"));
}

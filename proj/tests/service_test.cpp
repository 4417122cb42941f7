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

#include "ssd/service/server.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>

namespace {

using namespace ssd;
using namespace ssd::service;
using nlohmann::json;

std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ssd_service_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::uint8_t> tone_wav(double seconds, double hz = 440.0, int rate = 16000) {
  std::vector<double> x(static_cast<std::size_t>(seconds * rate));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.3 * std::sin(2.0 * M_PI * hz * static_cast<double>(i) / rate);
  return audio::encode_wav(audio::AudioClip(std::move(x), rate), 16);
}

std::string as_body(const std::vector<std::uint8_t>& b) { return {b.begin(), b.end()}; }

// Untrained phrase-level model; enough to exercise the plumbing.
std::filesystem::path write_model(const std::filesystem::path& dir, const std::string& experiment = "e1",
                                  std::uint64_t seed = 5) {
  const auto e = dataset::Experiment::parse(experiment);
  nnet::SmallCnnConfig c;
  c.input_shape = {128, e.preset() == features::Preset::Phrase ? 256 : 128, 3};
  c.blocks = {{4, 3, 4, true}, {8, 3, 2, true}};
  c.num_classes = e.num_classes();
  nnet::TrainingMeta meta;
  meta.experiment = e.name();
  const auto ckpt = nnet::Checkpoint::from_model(nnet::SmallCnn<float>(c, seed), meta);
  const auto path = dir / (experiment + "-" + std::to_string(seed) + ".ssdm");
  nnet::save_checkpoint(ckpt, path);
  return path;
}

class Running {
 public:
  explicit Running(ServiceOptions opts) : service(std::move(opts)) {
    service.install(server);
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~Running() {
    server.stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }

  ScreeningService service;
  httplib::Server server;
  int port = 0;
  std::thread thread;
};

ServiceOptions options(std::optional<std::filesystem::path> checkpoint, std::filesystem::path data = {},
                       std::string token = {}, std::filesystem::path web = {}) {
  ServiceOptions o;
  o.checkpoint = std::move(checkpoint);
  o.data_dir = std::move(data);
  o.admin_token = std::move(token);
  o.static_dir = std::move(web);
  return o;
}

const json kGoodQuestionnaire = {{"age", 5}, {"sex", "F"}, {"vocal_organs_normal", true}, {"consent", true}};

std::string new_session(httplib::Client& cli, json q = kGoodQuestionnaire) {
  auto r = cli.Post("/sessions", q.dump(), "application/json");
  EXPECT_TRUE(r);
  EXPECT_EQ(r->status, 201);
  return json::parse(r->body)["session_id"];
}

}  // namespace

TEST(Sessions, CreateAndReject) {
  Running svc({});
  auto cli = svc.client();
  const auto id = new_session(cli);
  EXPECT_FALSE(id.empty());
  auto got = cli.Get("/sessions/" + id);
  ASSERT_TRUE(got);
  EXPECT_EQ(got->status, 200);
  EXPECT_EQ(json::parse(got->body)["questionnaire"]["age"], 5);

  auto q = kGoodQuestionnaire;
  q["consent"] = false;
  auto r = cli.Post("/sessions", q.dump(), "application/json");
  EXPECT_EQ(r->status, 400);
  EXPECT_TRUE(json::parse(r->body)["fields"].contains("consent"));

  r = cli.Post("/sessions", "{not json", "application/json");
  EXPECT_EQ(r->status, 400);

  r = cli.Post("/sessions", json{{"consent", true}, {"sex", "X"}}.dump(), "application/json");
  EXPECT_EQ(r->status, 400);
  const auto fields = json::parse(r->body)["fields"];
  EXPECT_TRUE(fields.contains("age"));
  EXPECT_TRUE(fields.contains("sex"));
  EXPECT_TRUE(fields.contains("vocal_organs_normal"));

  EXPECT_EQ(cli.Get("/sessions/nope")->status, 404);
  EXPECT_EQ(cli.Get("/sessions/nope/report")->status, 404);
}

TEST(Phrases, FullStableTable) {
  Running svc({});
  auto cli = svc.client();
  auto a = cli.Get("/phrases");
  ASSERT_TRUE(a);
  const auto table = json::parse(a->body);
  ASSERT_EQ(table.size(), 96u);
  EXPECT_EQ(table[0]["romanization"], "Bùdīng");
  for (const auto& row : table) {
    for (const char* key : {"phrase_id", "text", "romanization", "translation"}) EXPECT_TRUE(row.contains(key));
  }
  EXPECT_EQ(cli.Get("/phrases")->body, a->body);
}

TEST(Responses, NeedsModelSessionAndPhrase) {
  Running svc({});
  auto cli = svc.client();
  const auto id = new_session(cli);
  const auto wav = as_body(tone_wav(1.0));
  EXPECT_EQ(cli.Post("/sessions/" + id + "/responses/P01", wav, "audio/wav")->status, 503);
  EXPECT_EQ(cli.Post("/sessions/missing/responses/P01", wav, "audio/wav")->status, 404);
  EXPECT_EQ(cli.Post("/sessions/" + id + "/responses/P99", wav, "audio/wav")->status, 404);
  EXPECT_EQ(cli.Get("/model")->status, 503);
}

TEST(Responses, PredictOverwriteAndReport) {
  const auto dir = fresh_dir("predict");
  Running svc(options(write_model(dir)));
  auto cli = svc.client();
  const auto id = new_session(cli);

  auto empty = cli.Get("/sessions/" + id + "/report");
  ASSERT_EQ(empty->status, 200);
  for (const auto& c : json::parse(empty->body)["categories"]) {
    EXPECT_EQ(c["flagged"], 0);
    EXPECT_EQ(c["mean_probability"], 0.0);
  }

  auto r = cli.Post("/sessions/" + id + "/responses/P01", as_body(tone_wav(1.0)), "audio/wav");
  ASSERT_EQ(r->status, 200) << r->body;
  auto body = json::parse(r->body);
  double sum = 0.0;
  for (const auto& [name, p] : body["probabilities"].items()) sum += p.get<double>();
  EXPECT_NEAR(sum, 1.0, 1e-6);
  EXPECT_GE(body["latency_ms"].get<double>(), 0.0);

  // second take at another pitch replaces the first
  r = cli.Post("/sessions/" + id + "/responses/P01", as_body(tone_wav(0.8, 900.0, 44100)), "audio/wav");
  ASSERT_EQ(r->status, 200);
  const auto second = json::parse(r->body);
  const auto report = cli.Get("/sessions/" + id + "/report");
  const auto rep = json::parse(report->body);
  EXPECT_EQ(rep["answered"], 1);
  EXPECT_EQ(rep["phrases"][0]["probabilities"], second["probabilities"]);
  int flagged = 0;
  for (const auto& c : rep["categories"]) flagged += c["flagged"].get<int>();
  EXPECT_EQ(flagged, 1);
  EXPECT_EQ(cli.Get("/sessions/" + id + "/report")->body, report->body);

  EXPECT_EQ(cli.Post("/sessions/" + id + "/responses/P02", as_body(tone_wav(3.5)), "audio/wav")->status, 422);
  EXPECT_EQ(cli.Post("/sessions/" + id + "/responses/P02", "RIFFnonsense", "audio/wav")->status, 422);
  EXPECT_EQ(json::parse(cli.Get("/sessions/" + id + "/report")->body)["answered"], 1);
}

TEST(Responses, ConcurrentPredictionsAgree) {
  const auto dir = fresh_dir("concurrent");
  Running svc(options(write_model(dir)));
  const auto wav = as_body(tone_wav(1.2, 300.0));
  std::vector<std::string> ids;
  {
    auto cli = svc.client();
    for (int i = 0; i < 4; ++i) ids.push_back(new_session(cli));
  }
  std::vector<json> out(ids.size());
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    workers.emplace_back([&, i] {
      auto cli = svc.client();
      auto r = cli.Post("/sessions/" + ids[i] + "/responses/P10", wav, "audio/wav");
      if (r && r->status == 200) out[i] = json::parse(r->body)["probabilities"];
    });
  }
  for (auto& t : workers) t.join();
  for (const auto& o : out) EXPECT_EQ(o, out[0]);
  EXPECT_FALSE(out[0].is_null());
}

TEST(Model, InfoAndHotSwap) {
  const auto dir = fresh_dir("swap");
  const auto first = write_model(dir, "e1", 1);
  const auto second = write_model(dir, "e2:backing", 2);
  Running svc(options(first));
  auto cli = svc.client();
  const auto before = json::parse(cli.Get("/model")->body);
  EXPECT_EQ(before["experiment"], "e1");
  EXPECT_EQ(before["preset"], "phrase");
  EXPECT_EQ(before["checkpoint_hash"].get<std::string>().size(), 16u);

  auto r = cli.Post("/admin/model", json{{"checkpoint", second.string()}}.dump(), "application/json");
  ASSERT_EQ(r->status, 200) << r->body;
  const auto after = json::parse(cli.Get("/model")->body);
  EXPECT_EQ(after["experiment"], "e2-backing");
  EXPECT_NE(after["checkpoint_hash"], before["checkpoint_hash"]);

  // binary model scores only its own category
  const auto id = new_session(cli);
  ASSERT_EQ(cli.Post("/sessions/" + id + "/responses/P03", as_body(tone_wav(0.5)), "audio/wav")->status, 200);
  const auto rep = json::parse(cli.Get("/sessions/" + id + "/report")->body);
  for (const auto& c : rep["categories"]) EXPECT_EQ(c["scored"], c["category"] == "Backing" ? 1 : 0);

  r = cli.Post("/admin/model", json{{"checkpoint", (dir / "absent.ssdm").string()}}.dump(), "application/json");
  EXPECT_EQ(r->status, 422);
  EXPECT_EQ(cli.Post("/admin/model", "[]", "application/json")->status, 400);
  EXPECT_EQ(json::parse(cli.Get("/model")->body)["experiment"], "e2-backing");
}

TEST(Model, AdminTokenRequired) {
  const auto dir = fresh_dir("token");
  const auto path = write_model(dir);
  Running svc(options(path, {}, "s3cret"));
  auto cli = svc.client();
  const auto body = json{{"checkpoint", path.string()}}.dump();
  EXPECT_EQ(cli.Post("/admin/model", body, "application/json")->status, 403);
  httplib::Headers h{{"X-Admin-Token", "s3cret"}};
  EXPECT_EQ(cli.Post("/admin/model", h, body, "application/json")->status, 200);
}

TEST(Store, ReplaysLogAndDonation) {
  const auto dir = fresh_dir("store");
  const auto model_path = write_model(dir);
  std::string kept, dropped;
  {
    Running svc(options(model_path, dir / "data"));
    auto cli = svc.client();
    auto q = kGoodQuestionnaire;
    q["donate"] = true;
    kept = new_session(cli, q);
    dropped = new_session(cli);
    ASSERT_EQ(cli.Post("/sessions/" + kept + "/responses/P05", as_body(tone_wav(1.0)), "audio/wav")->status, 200);
    ASSERT_EQ(cli.Post("/sessions/" + dropped + "/responses/P05", as_body(tone_wav(1.0)), "audio/wav")->status, 200);
  }
  EXPECT_TRUE(std::filesystem::exists(dir / "data" / "donated" / kept / "P05.wav"));
  EXPECT_FALSE(std::filesystem::exists(dir / "data" / "donated" / dropped));
  {
    std::ofstream torn(dir / "data" / "sessions.jsonl", std::ios::app);
    torn << "{\"event\":\"response\",\"sess";
  }
  SessionStore reopened(dir / "data");
  EXPECT_EQ(reopened.size(), 2u);
  const auto s = reopened.get(kept);
  ASSERT_TRUE(s);
  ASSERT_EQ(s->responses.size(), 1u);
  EXPECT_TRUE(s->questionnaire.donate);
  EXPECT_EQ(s->responses.at("P05").audio_file, (std::filesystem::path("donated") / kept / "P05.wav").string());
  EXPECT_EQ(reopened.get(dropped)->responses.at("P05").audio_file, "");
}

TEST(Report, SingleBackingResponse) {
  ScreeningSession s;
  s.session_id = "x";
  PhraseResponse r;
  r.phrase_id = "P01";
  r.prediction.classes = {"Stopping", "Backing", "FCDP", "Affrication"};
  r.prediction.probabilities = {0.05, 0.9, 0.03, 0.02};
  r.prediction.predicted = "Backing";
  r.prediction.category_probability = {{"Stopping", 0.05}, {"Backing", 0.9}, {"FCDP", 0.03}, {"Affrication", 0.02}};
  r.prediction.flagged = {"Backing"};
  s.responses["P01"] = r;
  const auto rep = session_report(s);
  for (const auto& c : rep["categories"]) {
    if (c["category"] == "Backing") {
      EXPECT_EQ(c["flagged"], 1);
      EXPECT_DOUBLE_EQ(c["mean_probability"].get<double>(), 0.9);
    } else {
      EXPECT_EQ(c["flagged"], 0);
    }
    EXPECT_LE(c["flagged"].get<int>(), rep["answered"].get<int>());
  }
}

TEST(Static, ServesBundle) {
  const auto dir = fresh_dir("static");
  std::ofstream(dir / "index.html") << "<html>screening</html>";
  Running svc(options(std::nullopt, {}, {}, dir));
  auto cli = svc.client();
  auto r = cli.Get("/index.html");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->body, "<html>screening</html>");
  EXPECT_EQ(cli.Get("/phrases")->status, 200);
}

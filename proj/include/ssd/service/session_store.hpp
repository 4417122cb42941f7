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
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssd/core/error.hpp"
#include "ssd/core/hash.hpp"
#include "ssd/dataset/labels.hpp"
#include "ssd/dataset/phrases.hpp"
#include "ssd/features/feature_io.hpp"
#include "ssd/service/inference.hpp"

namespace ssd::service {

struct Questionnaire {
  int age = 0;
  char sex = 'F';
  bool vocal_organs_normal = true;
  bool consent = false;
  bool donate = false;  // keep uploaded recordings
};

/// Field name -> problem, empty when the body is acceptable.
using FieldErrors = std::map<std::string, std::string>;

inline FieldErrors parse_questionnaire(const nlohmann::json& body, Questionnaire& q) {
  FieldErrors errors;
  if (!body.is_object()) {
    errors["body"] = "expected a JSON object";
    return errors;
  }
  const auto get_bool = [&](const char* key, bool& out, bool required) {
    if (!body.contains(key)) {
      if (required) errors[key] = "missing";
      return;
    }
    if (!body[key].is_boolean()) {
      errors[key] = "must be true or false";
      return;
    }
    out = body[key].get<bool>();
  };
  if (!body.contains("age")) {
    errors["age"] = "missing";
  } else if (!body["age"].is_number_integer() || body["age"].get<long long>() < 1 || body["age"].get<long long>() > 120) {
    errors["age"] = "must be an integer number of years between 1 and 120";
  } else {
    q.age = body["age"].get<int>();
  }
  if (!body.contains("sex")) {
    errors["sex"] = "missing";
  } else if (!body["sex"].is_string() || (body["sex"] != "F" && body["sex"] != "M")) {
    errors["sex"] = "must be \"F\" or \"M\"";
  } else {
    q.sex = body["sex"].get<std::string>()[0];
  }
  get_bool("vocal_organs_normal", q.vocal_organs_normal, true);
  get_bool("consent", q.consent, true);
  get_bool("donate", q.donate, false);
  if (!errors.contains("consent") && !q.consent) errors["consent"] = "consent is required to start a session";
  return errors;
}

inline nlohmann::json to_json(const Questionnaire& q) {
  return {{"age", q.age},
          {"sex", std::string(1, q.sex)},
          {"vocal_organs_normal", q.vocal_organs_normal},
          {"consent", q.consent},
          {"donate", q.donate}};
}

inline Questionnaire questionnaire_from_json(const nlohmann::json& j) {
  Questionnaire q;
  const auto errors = parse_questionnaire(j, q);
  require(errors.empty(), ErrorKind::Parse, "stored questionnaire is invalid");
  return q;
}

struct PhraseResponse {
  std::string phrase_id;
  Prediction prediction;
  std::string model_hash;
  std::string audio_file;  // empty unless donated
};

inline nlohmann::json to_json(const PhraseResponse& r) {
  const auto& p = r.prediction;
  nlohmann::json probs = nlohmann::json::object();
  for (std::size_t c = 0; c < p.classes.size(); ++c) probs[p.classes[c]] = p.probabilities[c];
  return {{"phrase_id", r.phrase_id},
          {"probabilities", probs},
          {"classes", p.classes},
          {"predicted", p.predicted},
          {"category_probability", p.category_probability},
          {"flagged", p.flagged},
          {"latency_ms", p.latency_ms},
          {"model_hash", r.model_hash},
          {"audio_retained", !r.audio_file.empty()}};
}

inline PhraseResponse response_from_json(const nlohmann::json& j, std::string audio_file) {
  PhraseResponse r;
  r.phrase_id = j.at("phrase_id");
  auto& p = r.prediction;
  p.classes = j.at("classes").get<std::vector<std::string>>();
  for (const auto& c : p.classes) p.probabilities.push_back(j.at("probabilities").at(c).get<double>());
  p.predicted = j.at("predicted");
  p.category_probability = j.at("category_probability").get<std::map<std::string, double>>();
  p.flagged = j.at("flagged").get<std::vector<std::string>>();
  p.latency_ms = j.at("latency_ms");
  r.model_hash = j.at("model_hash");
  r.audio_file = std::move(audio_file);
  return r;
}

struct ScreeningSession {
  std::string session_id;
  Questionnaire questionnaire;
  std::string created_at;  // UTC, ISO 8601
  std::map<std::string, PhraseResponse> responses;
};

inline nlohmann::json to_json(const ScreeningSession& s) {
  nlohmann::json responses = nlohmann::json::object();
  for (const auto& [id, r] : s.responses) responses[id] = to_json(r);
  return {{"session_id", s.session_id},
          {"questionnaire", to_json(s.questionnaire)},
          {"created_at", s.created_at},
          {"responses", responses}};
}

/// Per-category aggregate over the answered phrases. A category's mean
/// probability averages over every response that scored it.
inline nlohmann::json session_report(const ScreeningSession& s) {
  nlohmann::json categories = nlohmann::json::array();
  for (auto c : dataset::kAllCategories) {
    const std::string name(dataset::display_name(c));
    int flagged = 0, scored = 0;
    double total = 0.0;
    for (const auto& [id, r] : s.responses) {
      const auto& p = r.prediction;
      if (auto it = p.category_probability.find(name); it != p.category_probability.end()) {
        ++scored;
        total += it->second;
      }
      if (std::find(p.flagged.begin(), p.flagged.end(), name) != p.flagged.end()) ++flagged;
    }
    categories.push_back(
        {{"category", name}, {"flagged", flagged}, {"scored", scored}, {"mean_probability", scored ? total / scored : 0.0}});
  }
  nlohmann::json phrases = nlohmann::json::array();
  for (const auto& [id, r] : s.responses) {
    auto row = to_json(r);
    if (const auto* ph = dataset::find_phrase(id)) {
      row["text"] = std::string(ph->text);
      row["romanization"] = std::string(ph->romanization);
    }
    phrases.push_back(std::move(row));
  }
  return {{"session_id", s.session_id},
          {"answered", s.responses.size()},
          {"total_phrases", dataset::kPhrases.size()},
          {"categories", categories},
          {"phrases", phrases}};
}

inline std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Sessions live in memory and, when a directory is given, in an
/// append-only `sessions.jsonl` replayed at start-up. A torn final line
/// from a crash is ignored. All writes go through one mutex.
class SessionStore {
 public:
  explicit SessionStore(std::filesystem::path dir = {}) : dir_(std::move(dir)) {
    std::random_device rd;
    rng_.seed((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
    if (dir_.empty()) return;
    std::filesystem::create_directories(dir_);
    replay();
    log_.open(dir_ / "sessions.jsonl", std::ios::app);
    require(log_.good(), ErrorKind::Io, "cannot open " + (dir_ / "sessions.jsonl").string());
  }

  ScreeningSession create(const Questionnaire& q) {
    std::lock_guard lock(mu_);
    ScreeningSession s;
    do {
      s.session_id = hex64(rng_());
    } while (sessions_.contains(s.session_id));
    s.questionnaire = q;
    s.created_at = utc_now();
    append({{"event", "session"},
            {"session_id", s.session_id},
            {"questionnaire", to_json(q)},
            {"created_at", s.created_at}});
    sessions_[s.session_id] = s;
    return s;
  }

  std::optional<ScreeningSession> get(const std::string& id) const {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return std::nullopt;
    return it->second;
  }

  /// Stores (or overwrites) a phrase response; the WAV is kept only for
  /// sessions that opted into donation. False if the session is unknown.
  bool record(const std::string& id, PhraseResponse r, std::span<const std::uint8_t> wav) {
    std::lock_guard lock(mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) return false;
    r.audio_file.clear();
    if (it->second.questionnaire.donate && !dir_.empty()) {
      const auto rel = std::filesystem::path("donated") / id / (r.phrase_id + ".wav");
      std::filesystem::create_directories((dir_ / rel).parent_path());
      features::write_bytes(dir_ / rel, wav);
      r.audio_file = rel.string();
    }
    append({{"event", "response"}, {"session_id", id}, {"response", to_json(r)}, {"audio_file", r.audio_file}});
    it->second.responses[r.phrase_id] = std::move(r);
    return true;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return sessions_.size();
  }

 private:
  void append(const nlohmann::json& event) {
    if (!log_.is_open()) return;
    log_ << event.dump() << '\n';
    log_.flush();
    require(log_.good(), ErrorKind::Io, "session log write failed");
  }

  void replay() {
    std::ifstream in(dir_ / "sessions.jsonl");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto ev = nlohmann::json::parse(line, nullptr, false);
      if (ev.is_discarded()) continue;  // torn write
      try {
        const std::string id = ev.at("session_id");
        if (ev.at("event") == "session") {
          ScreeningSession s;
          s.session_id = id;
          s.questionnaire = questionnaire_from_json(ev.at("questionnaire"));
          s.created_at = ev.at("created_at");
          sessions_[id] = std::move(s);
        } else if (ev.at("event") == "response") {
          auto it = sessions_.find(id);
          if (it == sessions_.end()) continue;
          auto r = response_from_json(ev.at("response"), ev.value("audio_file", std::string{}));
          it->second.responses[r.phrase_id] = std::move(r);
        }
      } catch (const nlohmann::json::exception&) {
        continue;
      }
    }
  }

  std::filesystem::path dir_;
  mutable std::mutex mu_;
  std::map<std::string, ScreeningSession> sessions_;
  std::ofstream log_;
  std::mt19937_64 rng_;
};

}  // namespace ssd::service

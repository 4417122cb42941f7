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

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "ssd/dataset/phrases.hpp"
#include "ssd/service/inference.hpp"
#include "ssd/service/session_store.hpp"

// after Eigen: <resolv.h> defines a _res macro that breaks Eigen's headers
#include <httplib.h>

namespace ssd::service {

struct ServiceOptions {
  std::filesystem::path data_dir;    // session log and donated audio; empty keeps memory only
  std::filesystem::path static_dir;  // built UI bundle, served at /
  std::string admin_token;           // empty: admin calls only from loopback
  std::optional<std::filesystem::path> checkpoint;
};

inline nlohmann::json phrase_table() {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : dataset::kPhrases) {
    out.push_back({{"phrase_id", p.phrase_id},
                   {"text", p.text},
                   {"romanization", p.romanization},
                   {"translation", p.translation},
                   {"characters", p.characters}});
  }
  return out;
}

/// HTTP front end: screening sessions, per-phrase prediction, reports and
/// model management. Handlers may run concurrently.
class ScreeningService {
 public:
  explicit ScreeningService(ServiceOptions opts) : opts_(std::move(opts)), store_(opts_.data_dir) {
    if (opts_.checkpoint) set_model(DeployedModel::load(*opts_.checkpoint));
  }

  void set_model(std::shared_ptr<const DeployedModel> m) {
    std::lock_guard lock(model_mu_);
    model_ = std::move(m);
  }
  std::shared_ptr<const DeployedModel> model() const {
    std::lock_guard lock(model_mu_);
    return model_;
  }
  SessionStore& store() { return store_; }

  void install(httplib::Server& srv) {
    srv.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) { create_session(req, res); });
    srv.Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const auto s = store_.get(req.matches[1]);
      if (!s) return error(res, 404, "unknown session");
      reply(res, 200, to_json(*s));
    });
    srv.Get(R"(/sessions/([^/]+)/report)", [this](const httplib::Request& req, httplib::Response& res) {
      const auto s = store_.get(req.matches[1]);
      if (!s) return error(res, 404, "unknown session");
      reply(res, 200, session_report(*s));
    });
    srv.Post(R"(/sessions/([^/]+)/responses/([^/]+))",
             [this](const httplib::Request& req, httplib::Response& res) { respond(req, res); });
    srv.Get("/phrases", [](const httplib::Request&, httplib::Response& res) { reply(res, 200, phrase_table()); });
    srv.Get("/model", [this](const httplib::Request&, httplib::Response& res) {
      const auto m = model();
      if (!m) return error(res, 503, "no model loaded");
      reply(res, 200, m->info());
    });
    srv.Post("/admin/model", [this](const httplib::Request& req, httplib::Response& res) { swap_model(req, res); });
    if (!opts_.static_dir.empty()) srv.set_mount_point("/", opts_.static_dir.string());
    srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        error(res, 500, e.what());
      }
    });
  }

 private:
  static void reply(httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }
  static void error(httplib::Response& res, int status, const std::string& what, nlohmann::json fields = nullptr) {
    nlohmann::json body = {{"error", what}};
    if (!fields.is_null()) body["fields"] = std::move(fields);
    reply(res, status, body);
  }

  void create_session(const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded()) return error(res, 400, "body is not valid JSON");
    Questionnaire q;
    const auto problems = parse_questionnaire(body, q);
    if (!problems.empty()) return error(res, 400, "invalid questionnaire", problems);
    const auto s = store_.create(q);
    reply(res, 201, {{"session_id", s.session_id}, {"created_at", s.created_at}});
  }

  void respond(const httplib::Request& req, httplib::Response& res) {
    const std::string session = req.matches[1];
    const std::string phrase = req.matches[2];
    if (!store_.get(session)) return error(res, 404, "unknown session");
    if (!dataset::find_phrase(phrase)) return error(res, 404, "unknown phrase " + phrase);
    const auto m = model();
    if (!m) return error(res, 503, "no model loaded");
    const std::span<const std::uint8_t> wav(reinterpret_cast<const std::uint8_t*>(req.body.data()), req.body.size());
    PhraseResponse r;
    r.phrase_id = phrase;
    r.model_hash = m->hash();
    try {
      r.prediction = m->predict_wav(wav, session + "/" + phrase);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Numeric || e.kind() == ErrorKind::Io) throw;
      return error(res, 422, e.what());
    }
    if (!store_.record(session, r, wav)) return error(res, 404, "unknown session");
    reply(res, 200, to_json(r));
  }

  void swap_model(const httplib::Request& req, httplib::Response& res) {
    const bool allowed = opts_.admin_token.empty()
                             ? (req.remote_addr == "127.0.0.1" || req.remote_addr == "::1")
                             : req.get_header_value("X-Admin-Token") == opts_.admin_token;
    if (!allowed) return error(res, 403, "admin access required");
    const auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("checkpoint") || !body["checkpoint"].is_string()) {
      return error(res, 400, "expected {\"checkpoint\": \"<path>\"}");
    }
    try {
      auto next = DeployedModel::load(body["checkpoint"].get<std::string>());
      set_model(next);
      reply(res, 200, next->info());
    } catch (const Error& e) {
      error(res, 422, e.what());
    }
  }

  ServiceOptions opts_;
  SessionStore store_;
  mutable std::mutex model_mu_;
  std::shared_ptr<const DeployedModel> model_;
};

}  // namespace ssd::service

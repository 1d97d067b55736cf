// Copyright 2026 The DSR Workbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dsr/service/http.hpp"

#include <httplib.h>

#include <sstream>

#include "dsr/core/corpus_io.hpp"

namespace dsr::service {
namespace {

void send_json(httplib::Response& res, int status, const jsonl::OrderedJson& body) {
  res.status = status;
  res.set_content(body.dump() + "\n", "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

// Runs a handler, mapping workbench errors to status codes.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const NotFound& e) {
    send_error(res, 404, e.what());
  } catch (const Conflict& e) {
    send_error(res, 409, e.what());
  } catch (const ValidationError& e) {
    send_error(res, 400, e.what());
  } catch (const jsonl::Json::exception& e) {
    send_error(res, 400, std::string("malformed request: ") + e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

}  // namespace

HttpServer::HttpServer(AnnotationService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& srv = *server_;
  srv.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                           {"Access-Control-Allow-Headers", "Content-Type, X-Annotator"}});
  srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  srv.Get("/corpora", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, service_.corpora()); });
  });

  srv.Post("/corpora", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const std::string name = req.has_param("name") ? req.get_param_value("name") : "corpus";
      std::istringstream in(req.body);
      service_.load_corpus(parse_corpus(in, name, "request body"));
      send_json(res, 201, service_.corpora());
    });
  });

  srv.Get("/tasks/next", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!req.has_param("annotator")) throw ValidationError("missing annotator parameter");
      const auto task = service_.next_task(req.get_param_value("annotator"));
      if (task) {
        send_json(res, 200, {{"done", false}, {"task", task_to_json(*task)}});
      } else {
        send_json(res, 200, {{"done", true}});
      }
    });
  });

  srv.Post("/scores", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto body = jsonl::Json::parse(req.body);
      std::string annotator = req.get_header_value("X-Annotator");
      if (annotator.empty() && body.contains("annotator")) {
        annotator = body.at("annotator").get<std::string>();
      }
      const auto& task = body.at("task_id");
      const std::string task_id =
          task.is_number_unsigned() ? std::to_string(task.get<std::size_t>()) : task.get<std::string>();
      const auto& score = body.at("score");
      if (!score.is_number()) throw ValidationError("score must be a number");
      const auto event = service_.submit_score(annotator, task_id, body.at("dim").get<std::string>(),
                                               score.get<double>());
      send_json(res, 200, {{"ok", true}, {"event", event_to_json(event)}});
    });
  });

  srv.Get("/progress", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, progress_to_json(service_.progress())); });
  });

  srv.Get("/export", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      res.status = 200;
      res.set_content(service_.export_jsonl(), "application/x-ndjson");
    });
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind_any(const std::string& host) { return server_->bind_to_any_port(host); }

bool HttpServer::bind(const std::string& host, int port) { return server_->bind_to_port(host, port); }

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

bool HttpServer::running() const { return server_->is_running(); }

}  // namespace dsr::service

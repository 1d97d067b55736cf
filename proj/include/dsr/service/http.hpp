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

#pragma once

#include <memory>
#include <string>

#include "dsr/service/service.hpp"

namespace httplib {
class Server;
}

namespace dsr::service {

// HTTP+JSON front end:
//   GET  /corpora                 loaded corpus summary
//   POST /corpora?name=N          body is corpus JSONL; 409 while sessions are open
//   GET  /tasks/next?annotator=A  {"done":false,"task":{...}} or {"done":true}
//   POST /scores                  {"task_id","dim","score"}; annotator from the
//                                 X-Annotator header (or an "annotator" field)
//   GET  /progress                per-annotator and per-dimension counts
//   GET  /export                  annotations JSONL
// Invalid input answers 400, unknown ids 404.
class HttpServer {
 public:
  explicit HttpServer(AnnotationService& service);
  ~HttpServer();

  // Binds to an ephemeral port and returns it (tests); then call run().
  int bind_any(const std::string& host);
  bool bind(const std::string& host, int port);
  void run();  // blocks until stop()
  void stop();
  bool running() const;

 private:
  AnnotationService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace dsr::service

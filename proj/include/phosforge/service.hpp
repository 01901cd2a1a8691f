// Copyright 2026 The PhosForge Authors. All Rights Reserved.
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


// JSON-over-HTTP prediction service.
//
//   GET  /healthz     200 {"status":"ok"}
//   GET  /v1/model    model kind, architecture, metadata, normalisation ranges
//   POST /v1/predict  {"features":{name:value,...}}
//                     -> {"p_wtpct","p_ppm","out_of_range":[name...]}
//   POST /v1/whatif   {"base":{"features":{...}},
//                      "overrides":[{"feature":name,"value":v},...]}
//                     -> [{"applied_override","p_wtpct","p_ppm","delta_wtpct",
//                          "out_of_range"},...]
//
// Errors are {"error":message,"fields":{name:message}} with status 400 for
// schema problems, 415 for a non-JSON content type, 422 for values that break
// domain rules and 500 otherwise. Handlers are pure functions of the loaded
// model and the request.

#pragma once

#include <memory>
#include <string>

#include "phosforge/models.hpp"

namespace phosforge::service {

struct Request {
  std::string method;
  std::string path;
  std::string content_type;
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;  // always a JSON document
};

class Service {
 public:
  explicit Service(AnyModel model);

  const AnyModel& model() const { return model_; }
  Response handle(const Request& request) const;

  Response healthz() const;
  Response model_info() const;
  Response predict(const std::string& body) const;
  Response whatif(const std::string& body) const;

 private:
  AnyModel model_;
  std::string model_info_;
};

/// HTTP front end over a Service that outlives it.
class HttpServer {
 public:
  explicit HttpServer(const Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Returns the bound port; port 0 picks a free one. Throws Error on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called from another thread.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Loads the model and blocks serving on host:port. Throws Error if the model
/// cannot be loaded or the address cannot be bound.
void serve(const std::string& model_path, const std::string& host, int port);

}  // namespace phosforge::service

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


#include "phosforge/service.hpp"

#include <cmath>
#include <map>
#include <utility>

#include "httplib.h"
#include "json.hpp"

#include "phosforge/error.hpp"

namespace phosforge::service {
namespace {

using nlohmann::json;

class RequestError : public std::runtime_error {
 public:
  RequestError(int status, std::string message, std::map<std::string, std::string> fields = {})
      : std::runtime_error(std::move(message)), status_(status), fields_(std::move(fields)) {}

  int status() const { return status_; }
  const std::map<std::string, std::string>& fields() const { return fields_; }

 private:
  int status_;
  std::map<std::string, std::string> fields_;
};

Response json_response(int status, const json& body) { return {status, body.dump()}; }

Response error_response(int status, const std::string& message,
                        const std::map<std::string, std::string>& fields = {}) {
  json body{{"error", message}};
  body["fields"] = json::object();
  for (const auto& [k, v] : fields) body["fields"][k] = v;
  return json_response(status, body);
}

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error&) {
    throw RequestError(400, "request body is not valid JSON");
  }
}

double parse_number(const json& v, const std::string& field,
                    std::map<std::string, std::string>& problems) {
  if (!v.is_number()) {
    problems[field] = "must be a number";
    return 0.0;
  }
  return v.get<double>();
}

// Schema checks only; domain rules are applied afterwards.
HeatRecord parse_features(const json& container, const std::string& where) {
  if (!container.is_object()) throw RequestError(400, where + " must be a JSON object");
  const auto it = container.find("features");
  if (it == container.end() || !it->is_object()) {
    throw RequestError(400, where + " needs a \"features\" object",
                       {{"features", "required object of feature name to number"}});
  }
  std::map<std::string, std::string> problems;
  HeatRecord record;
  record.heat_id = "request";
  for (const auto& [name, value] : it->items()) {
    const auto id = feature_by_name(name);
    if (!id) {
      problems[name] = "unknown feature";
      continue;
    }
    record.set(*id, parse_number(value, name, problems));
  }
  for (const auto& info : feature_table()) {
    const std::string name(info.name);
    if (!record.get(info.id) && !problems.contains(name)) problems[name] = "required";
  }
  if (!problems.empty()) throw RequestError(400, "invalid features in " + where, problems);
  return record;
}

void check_domain(const HeatRecord& record) {
  const auto violations = validate_record(record);
  if (violations.empty()) return;
  std::map<std::string, std::string> fields;
  for (const auto& v : violations) fields.emplace(v.field, v.rule);
  throw RequestError(422, "features violate domain rules", fields);
}

json out_of_range_names(const nn::Prediction& p) {
  json names = json::array();
  for (FeatureId id : p.out_of_range) names.push_back(std::string(feature_name(id)));
  return names;
}

json architecture_json(const AnyModel& model) {
  if (const auto* net = std::get_if<nn::ModelArtifact>(&model)) {
    const auto& arch = net->params.architecture();
    return {{"widths", arch.widths()},
            {"activation", "sigmoid"},
            {"parameter_count", arch.parameter_count()},
            {"label", arch.to_string()}};
  }
  if (const auto* f = std::get_if<ForestArtifact>(&model)) {
    return {{"n_trees", f->forest.trees.size()}};
  }
  const auto& s = std::get<SvrArtifact>(model);
  return {{"support_vectors", s.model.support_count()}, {"gamma", s.model.gamma}};
}

std::string build_model_info(const AnyModel& model) {
  const json doc = to_json(model);
  json info{{"kind", std::string(model_kind(model))},
            {"format", doc["format"]},
            {"architecture", architecture_json(model)}};
  json ranges = json::array();
  const NormParams& norm = norm_params(model);
  for (const auto& f : feature_table()) {
    const Range& r = norm.features[index_of(f.id)];
    ranges.push_back({{"name", f.name}, {"unit", f.unit}, {"min", r.min}, {"max", r.max}});
  }
  info["normalization"] = {{"features", ranges},
                           {"target", {{"min", norm.target.min}, {"max", norm.target.max}}},
                           {"fitted_on", norm.fitted_on}};
  if (doc.contains("metadata")) {
    info["metadata"] = doc["metadata"];
  } else {
    info["metadata"] = {{"data_fingerprint", doc["data_fingerprint"]}, {"config", doc["config"]}};
  }
  return info.dump();
}

template <typename F>
Response guarded(F&& f) {
  try {
    return f();
  } catch (const RequestError& e) {
    return error_response(e.status(), e.what(), e.fields());
  } catch (const DataError& e) {
    return error_response(422, e.what());
  } catch (...) {
    return error_response(500, "internal error");
  }
}

}  // namespace

Service::Service(AnyModel model) : model_(std::move(model)), model_info_(build_model_info(model_)) {}

Response Service::healthz() const { return json_response(200, {{"status", "ok"}}); }

Response Service::model_info() const { return {200, model_info_}; }

Response Service::predict(const std::string& body) const {
  return guarded([&] {
    const HeatRecord record = parse_features(parse_body(body), "request body");
    check_domain(record);
    const nn::Prediction p = phosforge::predict(model_, record);
    return json_response(200, {{"p_wtpct", p.p_wtpct},
                               {"p_ppm", p.p_wtpct * kPpmPerWtPct},
                               {"out_of_range", out_of_range_names(p)}});
  });
}

Response Service::whatif(const std::string& body) const {
  return guarded([&] {
    const json req = parse_body(body);
    if (!req.is_object()) throw RequestError(400, "request body must be a JSON object");
    if (!req.contains("base")) throw RequestError(400, "missing base", {{"base", "required"}});
    const HeatRecord base = parse_features(req["base"], "base");

    std::vector<std::pair<FeatureId, double>> overrides;
    if (req.contains("overrides")) {
      const json& list = req["overrides"];
      if (!list.is_array()) {
        throw RequestError(400, "overrides must be an array", {{"overrides", "must be an array"}});
      }
      std::map<std::string, std::string> problems;
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "overrides[" + std::to_string(i) + "]";
        const json& o = list[i];
        if (!o.is_object() || !o.contains("feature") || !o["feature"].is_string() ||
            !o.contains("value")) {
          problems[where] = "needs a string \"feature\" and a numeric \"value\"";
          continue;
        }
        const auto id = feature_by_name(o["feature"].get<std::string>());
        if (!id) {
          problems[where + ".feature"] = "unknown feature";
          continue;
        }
        const double v = parse_number(o["value"], where + ".value", problems);
        overrides.emplace_back(*id, v);
      }
      if (!problems.empty()) throw RequestError(400, "invalid overrides", problems);
    }

    check_domain(base);
    const double base_p = phosforge::predict(model_, base).p_wtpct;
    json out = json::array();
    auto entry = [&](const json& applied, const HeatRecord& record) {
      const nn::Prediction p = phosforge::predict(model_, record);
      out.push_back({{"applied_override", applied},
                     {"p_wtpct", p.p_wtpct},
                     {"p_ppm", p.p_wtpct * kPpmPerWtPct},
                     {"delta_wtpct", p.p_wtpct - base_p},
                     {"out_of_range", out_of_range_names(p)}});
    };
    if (overrides.empty()) {
      entry(nullptr, base);
    } else {
      for (const auto& [id, value] : overrides) {
        HeatRecord r = base;
        r.set(id, value);
        check_domain(r);
      }
      for (const auto& [id, value] : overrides) {
        HeatRecord r = base;
        r.set(id, value);
        entry({{"feature", std::string(feature_name(id))}, {"value", value}}, r);
      }
    }
    return json_response(200, out);
  });
}

Response Service::handle(const Request& request) const {
  const bool get = request.method == "GET";
  const bool post = request.method == "POST";
  const bool known = request.path == "/healthz" || request.path == "/v1/model" ||
                     request.path == "/v1/predict" || request.path == "/v1/whatif";
  if (!known) return error_response(404, "no such endpoint");
  if (request.path == "/healthz" || request.path == "/v1/model") {
    if (!get) return error_response(405, "method not allowed");
    return request.path == "/healthz" ? healthz() : model_info();
  }
  if (!post) return error_response(405, "method not allowed");
  const std::string_view ct = request.content_type;
  if (ct.substr(0, ct.find(';')) != "application/json") {
    return error_response(415, "content type must be application/json");
  }
  return request.path == "/v1/predict" ? predict(request.body) : whatif(request.body);
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(const Service& service) : impl_(std::make_unique<Impl>()) {
  auto route = [&service](const httplib::Request& req, httplib::Response& res) {
    const Response r =
        service.handle({req.method, req.path, req.get_header_value("Content-Type"), req.body});
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  for (const char* path : {"/healthz", "/v1/model", "/v1/predict", "/v1/whatif"}) {
    impl_->server.Get(path, route);
    impl_->server.Post(path, route);
  }
  impl_->server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(error_response(res.status, "request failed").body, "application/json");
    }
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void serve(const std::string& model_path, const std::string& host, int port) {
  const Service service(load_model_file(model_path));
  HttpServer server(service);
  server.bind(host, port);
  server.listen();
}

}  // namespace phosforge::service

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


#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "support.hpp"

#include "phosforge/models.hpp"
#include "phosforge/pipeline.hpp"
#include "phosforge/service.hpp"

using namespace phosforge;
using namespace phosforge::service;
using nlohmann::json;

namespace {

// SVR fitted to clean synthetic heats: quick to train and faithful to the
// generator's coefficient signs.
const Service& synthetic_service() {
  static const Service s = [] {
    SynthConfig c;
    c.n_records = 600;
    c.seed = 4;
    const Dataset d = generate_synthetic(c);
    pipeline::TrainOptions o;
    o.family = pipeline::ModelFamily::kSvr;
    o.svr.C = 10.0;
    o.svr.epsilon_tube = 0.005;
    return Service(pipeline::train_model(d, Dataset{}, o).model);
  }();
  return s;
}

json features_of(const HeatRecord& r) {
  json f = json::object();
  for (const auto& info : feature_table()) f[std::string(info.name)] = *r.get(info.id);
  return f;
}

json predict_body(const HeatRecord& r) { return {{"features", features_of(r)}}; }

Response post(const std::string& path, const json& body) {
  return synthetic_service().handle({"POST", path, "application/json", body.dump()});
}

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("health and model info") {
    const Service& s = synthetic_service();
    const Response h = s.handle({"GET", "/healthz", "", ""});
    CHECK(h.status == 200);
    CHECK(json::parse(h.body) == json{{"status", "ok"}});
    const Response m = s.handle({"GET", "/v1/model", "", ""});
    CHECK(m.status == 200);
    const json info = json::parse(m.body);
    CHECK(info.at("kind") == "svr");
    CHECK(info.at("format") == "phosforge-svr/1");
    CHECK(info.at("normalization").at("features").size() == 12);
    CHECK(info.at("normalization").at("features")[6].at("name") == "injected_oxygen");
    CHECK(info.contains("metadata"));
  }

  TEST_CASE("predict matches the library path") {
    const HeatRecord r = testing::mean_heat();
    const Response res = post("/v1/predict", predict_body(r));
    REQUIRE(res.status == 200);
    const json j = json::parse(res.body);
    const double expect = predict(synthetic_service().model(), r).p_wtpct;
    CHECK(j.at("p_wtpct").get<double>() == expect);
    CHECK(j.at("p_ppm").get<double>() == doctest::Approx(expect * 1e4).epsilon(1e-14));
    CHECK(j.at("out_of_range").empty());
    CHECK(post("/v1/predict", predict_body(r)).body == res.body);
  }

  TEST_CASE("out-of-range features are named") {
    HeatRecord r = testing::mean_heat();
    r.set(FeatureId::kEnergy, 90000);
    const json j = json::parse(post("/v1/predict", predict_body(r)).body);
    CHECK(j.at("out_of_range") == json::array({"energy"}));
  }

  TEST_CASE("schema errors give 400 with per-field messages") {
    json body = predict_body(testing::mean_heat());
    body["features"].erase("duration");
    body["features"]["lime"] = "lots";
    body["features"]["colour"] = 3;
    const Response r = post("/v1/predict", body);
    CHECK(r.status == 400);
    const json e = json::parse(r.body);
    CHECK(e.at("fields").at("duration") == "required");
    CHECK(e.at("fields").contains("colour"));
    CHECK(e.contains("error"));

    CHECK(post("/v1/predict", json::array()).status == 400);
    CHECK(post("/v1/predict", json{{"x", 1}}).status == 400);
    CHECK(synthetic_service().predict("{nope").status == 400);
  }

  TEST_CASE("domain violations give 422") {
    HeatRecord r = testing::mean_heat();
    r.set(FeatureId::kTapTemp, 25);
    const Response res = post("/v1/predict", predict_body(r));
    CHECK(res.status == 422);
    CHECK_FALSE(json::parse(res.body).at("fields").empty());
  }

  TEST_CASE("routing, methods and content type") {
    const Service& s = synthetic_service();
    CHECK(s.handle({"GET", "/nowhere", "", ""}).status == 404);
    CHECK(s.handle({"POST", "/healthz", "application/json", "{}"}).status == 405);
    CHECK(s.handle({"GET", "/v1/predict", "", ""}).status == 405);
    const std::string body = predict_body(testing::mean_heat()).dump();
    CHECK(s.handle({"POST", "/v1/predict", "text/plain", body}).status == 415);
    CHECK(s.handle({"POST", "/v1/predict", "application/json; charset=utf-8", body}).status ==
          200);
  }

  TEST_CASE("whatif with no overrides returns the base") {
    const HeatRecord base = testing::mean_heat();
    for (const json& req : {json{{"base", predict_body(base)}},
                            json{{"base", predict_body(base)}, {"overrides", json::array()}}}) {
      const Response r = post("/v1/whatif", req);
      REQUIRE(r.status == 200);
      const json j = json::parse(r.body);
      REQUIRE(j.size() == 1);
      CHECK(j[0].at("applied_override").is_null());
      CHECK(j[0].at("delta_wtpct") == 0.0);
    }
  }

  TEST_CASE("whatif applies each override to the base in order") {
    const HeatRecord base = testing::mean_heat();
    const json overrides = json::array({{{"feature", "injected_oxygen"}, {"value", 210.0}},
                                        {{"feature", "duration"}, {"value", 190.0}},
                                        {{"feature", "injected_oxygen"}, {"value", 150.0}}});
    const Response r = post("/v1/whatif", {{"base", predict_body(base)}, {"overrides", overrides}});
    REQUIRE(r.status == 200);
    const json j = json::parse(r.body);
    REQUIRE(j.size() == 3);
    const double base_p = predict(synthetic_service().model(), base).p_wtpct;
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(j[i].at("applied_override") == overrides[i]);
      HeatRecord one = base;
      one.set(*feature_by_name(overrides[i]["feature"].get<std::string>()),
              overrides[i]["value"].get<double>());
      const double p = predict(synthetic_service().model(), one).p_wtpct;
      CHECK(j[i].at("p_wtpct").get<double>() == p);
      CHECK(j[i].at("delta_wtpct").get<double>() == p - base_p);
    }
    CHECK(j[0].at("delta_wtpct").get<double>() < 0.0);  // more oxygen
    CHECK(j[1].at("delta_wtpct").get<double>() > 0.0);  // longer heat
    CHECK(j[2].at("delta_wtpct").get<double>() > 0.0);  // less oxygen
  }

  TEST_CASE("whatif validation") {
    const json base = predict_body(testing::mean_heat());
    CHECK(post("/v1/whatif", json{{"overrides", json::array()}}).status == 400);
    CHECK(post("/v1/whatif", json{{"base", base}, {"overrides", 3}}).status == 400);
    const Response bad = post(
        "/v1/whatif",
        {{"base", base}, {"overrides", json::array({{{"feature", "sparkle"}, {"value", 1}}})}});
    CHECK(bad.status == 400);
    CHECK(json::parse(bad.body).at("fields").contains("overrides[0].feature"));
    CHECK(post("/v1/whatif",
               {{"base", base},
                {"overrides", json::array({{{"feature", "tap_temp"}, {"value", -5}}})}})
              .status == 422);
  }

  TEST_CASE("HTTP loopback") {
    const Service& s = synthetic_service();
    HttpServer server(s);
    const int port = server.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    std::thread t([&] { server.listen(); });
    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(5);

    auto h = client.Get("/healthz");
    REQUIRE(h);
    CHECK(h->status == 200);
    CHECK(h->get_header_value("Content-Type") == "application/json");

    const std::string body = predict_body(testing::mean_heat()).dump();
    auto p = client.Post("/v1/predict", body, "application/json");
    REQUIRE(p);
    CHECK(p->status == 200);
    CHECK(p->body == s.predict(body).body);

    auto wrong = client.Post("/v1/predict", body, "text/plain");
    REQUIRE(wrong);
    CHECK(wrong->status == 415);

    auto missing = client.Get("/v2/anything");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    CHECK(json::parse(missing->body).contains("error"));

    server.stop();
    t.join();
  }
}

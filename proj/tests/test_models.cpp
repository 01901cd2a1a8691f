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


#include <cstring>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

#include "phosforge/error.hpp"
#include "phosforge/models.hpp"
#include "phosforge/pipeline.hpp"

using namespace phosforge;
using nlohmann::json;

namespace {

AnyModel trained(pipeline::ModelFamily family) {
  const Dataset d = testing::spread_dataset(120);
  pipeline::TrainOptions o;
  o.family = family;
  o.architecture = nn::Architecture::ann1();
  o.network.epochs = 3;
  o.network.batch_size = 20;
  o.forest.n_trees = 5;
  return pipeline::train_model(d, Dataset{}, o, d[0]).model;
}

std::string dump(const AnyModel& m) {
  std::ostringstream out;
  save_model(m, out);
  return out.str();
}

AnyModel reload(const std::string& text) {
  std::istringstream in(text);
  return load_model(in);
}

bool bitwise(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_SUITE("models") {
  TEST_CASE("round trips preserve predictions bit for bit") {
    const Dataset probe = testing::spread_dataset(40, 77);
    for (auto family : {pipeline::ModelFamily::kNetwork, pipeline::ModelFamily::kForest,
                        pipeline::ModelFamily::kSvr}) {
      CAPTURE(pipeline::to_string(family));
      const AnyModel m = trained(family);
      const std::string text = dump(m);
      CHECK(text.back() == '\n');
      const AnyModel back = reload(text);
      CHECK(model_kind(back) == model_kind(m));
      CHECK(dump(back) == text);
      for (const auto& r : probe) {
        CHECK(bitwise(predict(back, r).p_wtpct, predict(m, r).p_wtpct));
      }
    }
  }

  TEST_CASE("network document layout") {
    const AnyModel m = trained(pipeline::ModelFamily::kNetwork);
    const json j = to_json(m);
    CHECK(j.at("format") == "phosforge-model/1");
    CHECK(j.at("architecture").at("widths") == json::array({12, 16, 8, 1}));
    CHECK(j.at("architecture").at("activation") == "sigmoid");
    REQUIRE(j.at("layers").size() == 3);
    const json& first = j.at("layers")[0];
    CHECK(first.at("fan_in") == 12);
    CHECK(first.at("fan_out") == 16);
    CHECK(first.at("weights").size() == 16 * 12);
    CHECK(first.at("bias").size() == 16);
    const auto& art = std::get<nn::ModelArtifact>(m);
    CHECK(first.at("weights")[1].get<double>() == art.params.layer(0).row(0)[1]);
    CHECK(first.at("weights")[12].get<double>() == art.params.layer(0).row(1)[0]);
    CHECK(j.at("normalization").at("features").size() == 12);
    CHECK(j.at("normalization").at("target").at("name") == "endpoint_p");
    const json& meta = j.at("metadata");
    CHECK(meta.at("train_config").at("epochs") == 3);
    CHECK(meta.at("train_config").at("early_stopping").is_null());
    CHECK_FALSE(meta.contains("created"));
    CHECK(meta.at("example").at("heat_id") == "T0");
    CHECK(meta.at("data_fingerprint").get<std::string>().size() == 16);
  }

  TEST_CASE("numbers survive the text form exactly") {
    AnyModel m = trained(pipeline::ModelFamily::kNetwork);
    auto& art = std::get<nn::ModelArtifact>(m);
    art.params.flat()[0] = 0.1 + 0.2;
    art.params.flat()[1] = 1.0 / 3.0;
    art.params.flat()[2] = -5e-324;
    const AnyModel back = reload(dump(m));
    const auto& b = std::get<nn::ModelArtifact>(back);
    CHECK(b.params == art.params);
  }

  TEST_CASE("format errors") {
    CHECK_THROWS_AS(reload("not json"), FormatError);
    CHECK_THROWS_AS(reload("[1, 2]"), FormatError);
    CHECK_THROWS_AS(reload(R"({"format": "phosforge-model/9"})"), FormatError);
    CHECK_THROWS_AS(reload(R"({"format": "phosforge-model/1"})"), FormatError);

    const json good = to_json(trained(pipeline::ModelFamily::kNetwork));
    auto broken = [&](auto edit) {
      json j = good;
      edit(j);
      return reload(j.dump());
    };
    CHECK_THROWS_AS(broken([](json& j) { j["layers"][0]["weights"].erase(0); }), FormatError);
    CHECK_THROWS_AS(broken([](json& j) { j["layers"][1]["bias"] = "x"; }), FormatError);
    CHECK_THROWS_AS(broken([](json& j) { j["architecture"]["activation"] = "relu"; }),
                    FormatError);
    CHECK_THROWS_AS(broken([](json& j) { j["architecture"]["widths"][0] = 11; }), FormatError);
    CHECK_THROWS_AS(broken([](json& j) { j["layers"].erase(2); }), FormatError);
    CHECK_THROWS_AS(broken([](json& j) { j["normalization"]["features"].erase(3); }),
                    FormatError);
    CHECK_THROWS_AS(broken([](json& j) { j["normalization"]["features"][0]["name"] = "lime"; }),
                    FormatError);
    CHECK_THROWS_AS(broken([](json& j) {
                      j["normalization"]["target"]["max"] = j["normalization"]["target"]["min"];
                    }),
                    FormatError);
  }

  TEST_CASE("forest documents reject cyclic or dangling nodes") {
    const json good = to_json(trained(pipeline::ModelFamily::kForest));
    CHECK(good.at("format") == "phosforge-forest/1");
    json j = good;
    REQUIRE(j["trees"][0][0].size() == 4);
    j["trees"][0][0][2] = 0;
    CHECK_THROWS_AS(reload(j.dump()), FormatError);
    j = good;
    j["trees"][0][0][3] = 100000;
    CHECK_THROWS_AS(reload(j.dump()), FormatError);
    j = good;
    j["trees"][0][0] = json::array({1, 2});
    CHECK_THROWS_AS(reload(j.dump()), FormatError);
    j = good;
    j["trees"] = json::array();
    CHECK_THROWS_AS(reload(j.dump()), FormatError);
  }

  TEST_CASE("svr documents check their blocks") {
    json j = to_json(trained(pipeline::ModelFamily::kSvr));
    CHECK(j.at("format") == "phosforge-svr/1");
    REQUIRE_FALSE(j["coefficients"].empty());
    j["coefficients"].push_back(0.5);
    CHECK_THROWS_AS(reload(j.dump()), FormatError);
  }

  TEST_CASE("file helpers") {
    CHECK_THROWS_AS(load_model_file("/nonexistent/model.json"), Error);
  }
}

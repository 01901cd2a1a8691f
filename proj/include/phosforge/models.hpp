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

// Trained-model documents and their JSON persistence.
//
// Each model family has a versioned format tag:
//   phosforge-model/1   feedforward network
//   phosforge-forest/1  random forest
//   phosforge-svr/1     epsilon-SVR
// Network parameters are stored per layer as a row-major weight list
// (fan_out rows x fan_in columns) followed by the bias list. Numbers use the
// shortest decimal form that parses back to the identical double.

#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "phosforge/baselines.hpp"
#include "phosforge/nn.hpp"
#include "phosforge/preprocess.hpp"

namespace phosforge {

inline constexpr std::string_view kForestFormat = "phosforge-forest/1";
inline constexpr std::string_view kSvrFormat = "phosforge-svr/1";

struct ForestArtifact {
  baselines::Forest forest;
  baselines::ForestConfig config;
  NormParams norm;
  std::string data_fingerprint;
};

struct SvrArtifact {
  baselines::SvrModel model;
  baselines::SvrConfig config;
  NormParams norm;
  std::string data_fingerprint;
};

using AnyModel = std::variant<nn::ModelArtifact, ForestArtifact, SvrArtifact>;

/// "network", "forest" or "svr".
std::string_view model_kind(const AnyModel& model);
const NormParams& norm_params(const AnyModel& model);
/// Prediction on the normalised target scale.
double predict_normalized(const AnyModel& model, std::span<const double> x);
/// Normalise, predict, map back to wt%. Networks go through nn::predict.
nn::Prediction predict(const AnyModel& model, const HeatRecord& record);

nlohmann::json norm_to_json(const NormParams& norm);
NormParams norm_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AnyModel& model);
/// Throws FormatError on an unknown format tag or inconsistent shapes.
AnyModel model_from_json(const nlohmann::json& j);

/// Pretty-printed JSON, newline terminated.
void save_model(const AnyModel& model, std::ostream& out);
AnyModel load_model(std::istream& in);
void save_model_file(const AnyModel& model, const std::string& path);
AnyModel load_model_file(const std::string& path);

}  // namespace phosforge

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


// In-memory training and cross-validation shared by the CLI and the tests.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phosforge/baselines.hpp"
#include "phosforge/metrics.hpp"
#include "phosforge/models.hpp"
#include "phosforge/nn.hpp"

namespace phosforge::pipeline {

enum class ModelFamily { kNetwork, kForest, kSvr };

/// "ann", "rf" or "svr".
ModelFamily parse_family(std::string_view name);
std::string_view to_string(ModelFamily family);

struct TrainOptions {
  ModelFamily family = ModelFamily::kNetwork;
  nn::Architecture architecture = nn::Architecture::ann3();
  nn::TrainConfig network;
  baselines::ForestConfig forest;
  baselines::SvrConfig svr;
  /// Stored as network metadata; empty keeps model files reproducible.
  std::string created;
};

struct TrainOutcome {
  AnyModel model;
  std::optional<nn::TrainReport> network_report;
  std::optional<baselines::SvrTrainReport> svr_report;
};

/// Fits min-max parameters on `train`, normalises both sets and trains the
/// chosen family. `val` may be empty; only networks use it. `example` is
/// recorded in network metadata.
TrainOutcome train_model(const Dataset& train, const Dataset& val, const TrainOptions& options,
                         std::optional<HeatRecord> example = std::nullopt);

/// epoch,train_loss,val_loss rows for networks; a one-line summary otherwise.
void write_train_report_csv(const TrainOutcome& outcome, std::ostream& out);

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  metrics::EvaluationReport report;
};

/// K-fold cross-validation: records are shuffled with `seed` and cut into k
/// contiguous folds; fold i is scored by a model trained on the others.
/// Early stopping is ignored since no validation set is held out.
std::vector<FoldResult> cross_validate(const Dataset& dataset, TrainOptions options,
                                       std::size_t folds, std::uint64_t seed,
                                       std::span<const double> thresholds =
                                           metrics::kDefaultThresholds);

}  // namespace phosforge::pipeline

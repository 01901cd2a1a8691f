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

// Regression metrics and the hit-rate protocol.
//
// MSE, RMSE, R^2 and r are reported on the normalised target scale; hit rates
// are counted in wt% after denormalising predictions and targets.

#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "phosforge/domain.hpp"
#include "phosforge/models.hpp"

namespace phosforge::metrics {

inline const std::vector<double> kDefaultThresholds = {0.001, 0.002, 0.003, 0.004};

/// Throws DataError on empty input or length mismatch.
double mse(std::span<const double> pred, std::span<const double> actual);
double rmse(std::span<const double> pred, std::span<const double> actual);
/// 1 - SS_res / SS_tot. Throws DataError when the actuals are constant.
double r2(std::span<const double> pred, std::span<const double> actual);

/// Fraction of |pred - actual| <= threshold for each threshold. The boundary is
/// inclusive up to a 1e-15 wt% slack so that decimal thresholds such as 0.001
/// count pairs whose printed difference is exactly the threshold.
std::map<double, double> hit_rate(std::span<const double> pred_wtpct,
                                  std::span<const double> actual_wtpct,
                                  std::span<const double> thresholds);

struct EvaluationReport {
  std::string model_kind;
  std::size_t n = 0;
  double mse = 0.0;
  double rmse = 0.0;
  double r2 = 0.0;
  std::optional<double> r;  // absent when the predictions are constant
  std::map<double, double> hit_rates;
  std::string scale_note;
};

/// Scores `model` on a test set that carries measured endpoint P, using the
/// model's own normalisation parameters.
EvaluationReport evaluate(const AnyModel& model, const Dataset& test_set,
                          std::span<const double> thresholds = kDefaultThresholds);

/// metric,value rows; hit rates appear as hit_rate@<threshold>.
void write_report_csv(const EvaluationReport& report, std::ostream& out);
nlohmann::json report_to_json(const EvaluationReport& report);

}  // namespace phosforge::metrics

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

#include "phosforge/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include "phosforge/error.hpp"
#include "phosforge/preprocess.hpp"
#include "phosforge/stats.hpp"

namespace phosforge::metrics {
namespace {

constexpr double kHitSlack = 1e-15;

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DataError("length mismatch: " + std::to_string(a.size()) + " predictions vs " +
                    std::to_string(b.size()) + " actuals");
  }
  if (a.empty()) throw DataError("metrics need at least one pair");
}

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

double mse(std::span<const double> pred, std::span<const double> actual) {
  check_lengths(pred, actual);
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double e = pred[i] - actual[i];
    sum += e * e;
  }
  return sum / static_cast<double>(pred.size());
}

double rmse(std::span<const double> pred, std::span<const double> actual) {
  return std::sqrt(mse(pred, actual));
}

double r2(std::span<const double> pred, std::span<const double> actual) {
  check_lengths(pred, actual);
  double mean = 0.0;
  for (double y : actual) mean += y;
  mean /= static_cast<double>(actual.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ss_res += (pred[i] - actual[i]) * (pred[i] - actual[i]);
    ss_tot += (actual[i] - mean) * (actual[i] - mean);
  }
  if (!(ss_tot > 0.0)) throw DataError("R^2 is undefined for constant actuals");
  return 1.0 - ss_res / ss_tot;
}

std::map<double, double> hit_rate(std::span<const double> pred_wtpct,
                                  std::span<const double> actual_wtpct,
                                  std::span<const double> thresholds) {
  check_lengths(pred_wtpct, actual_wtpct);
  std::map<double, double> out;
  for (double t : thresholds) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DataError("hit-rate threshold must be >= 0");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred_wtpct.size(); ++i) {
      if (std::abs(pred_wtpct[i] - actual_wtpct[i]) <= t + kHitSlack) ++hits;
    }
    out[t] = static_cast<double>(hits) / static_cast<double>(pred_wtpct.size());
  }
  return out;
}

EvaluationReport evaluate(const AnyModel& model, const Dataset& test_set,
                          std::span<const double> thresholds) {
  const NormParams& norm = norm_params(model);
  const NormalizedDataset data = normalize(test_set, norm);
  const std::size_t n = data.samples.size();
  if (n == 0) throw DataError("test set is empty");

  std::vector<double> pred(n);
  std::vector<double> pred_wt(n);
  std::vector<double> actual_wt(n);
  for (std::size_t i = 0; i < n; ++i) {
    pred[i] = predict_normalized(model, data.samples.row(i));
    pred_wt[i] = norm.denormalize_target(pred[i]);
    actual_wt[i] = norm.denormalize_target(data.samples.y[i]);
  }

  EvaluationReport report;
  report.model_kind = std::string(model_kind(model));
  report.n = n;
  report.mse = mse(pred, data.samples.y);
  report.rmse = std::sqrt(report.mse);
  report.r2 = r2(pred, data.samples.y);
  const bool constant =
      std::all_of(pred.begin(), pred.end(), [&](double v) { return v == pred.front(); });
  if (!constant) report.r = stats::pearson_r(pred, data.samples.y);
  report.hit_rates = hit_rate(pred_wt, actual_wt, thresholds);
  report.scale_note =
      "mse, rmse, r2 and r on the min-max normalised target scale; hit rates in wt%";
  return report;
}

void write_report_csv(const EvaluationReport& report, std::ostream& out) {
  out << "metric,value\n";
  out << "model," << report.model_kind << '\n';
  out << "n," << report.n << '\n';
  out << "mse," << shortest(report.mse) << '\n';
  out << "rmse," << shortest(report.rmse) << '\n';
  out << "r2," << shortest(report.r2) << '\n';
  out << "r," << (report.r ? shortest(*report.r) : std::string("nan")) << '\n';
  for (const auto& [t, rate] : report.hit_rates) {
    out << "hit_rate@" << shortest(t) << ',' << shortest(rate) << '\n';
  }
}

nlohmann::json report_to_json(const EvaluationReport& report) {
  nlohmann::json hits = nlohmann::json::array();
  for (const auto& [t, rate] : report.hit_rates) {
    hits.push_back({{"threshold_wtpct", t}, {"fraction", rate}});
  }
  return {
      {"model", report.model_kind},
      {"n", report.n},
      {"mse", report.mse},
      {"rmse", report.rmse},
      {"r2", report.r2},
      {"r", report.r ? nlohmann::json(*report.r) : nlohmann::json(nullptr)},
      {"hit_rates", hits},
      {"scale_note", report.scale_note},
  };
}

}  // namespace phosforge::metrics

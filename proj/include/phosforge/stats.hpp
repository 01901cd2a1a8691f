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

// Correlation analysis of the process inputs against endpoint phosphorus.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "phosforge/domain.hpp"

namespace phosforge::stats {

/// Pearson product-moment correlation. Requires equal lengths >= 3 and
/// non-constant inputs; throws DataError otherwise. Result clamped to [-1, 1].
double pearson_r(std::span<const double> x, std::span<const double> y);

/// t = r sqrt(n - 2) / sqrt(1 - r^2). Throws DataError for |r| >= 1 or n < 3.
double t_statistic(double r, std::size_t n);

/// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1],
/// evaluated with a modified-Lentz continued fraction.
double incomplete_beta(double x, double a, double b);

/// Two-sided tail probability P(|T| >= |t|) of Student's t with `dof` degrees
/// of freedom. Floored at 1e-300.
double student_t_two_sided(double t, double dof);

/// Two-sided p-value of a sample correlation r over n pairs (dof = n - 2).
double p_value(double r, std::size_t n);

enum class Significance { kVerySignificant, kSignificant, kNotSignificant };

/// p < 0.01, 0.01 <= p < 0.05, p >= 0.05.
Significance classify(double p);
/// "**", "*" or "".
std::string_view stars(Significance s);
std::string_view to_string(Significance s);

struct CorrelationEntry {
  FeatureId feature;
  double r;
  double t;
  double p;
  Significance significance;
};

struct CorrelationReport {
  std::size_t n = 0;
  std::vector<CorrelationEntry> entries;  // 12 entries, |r| descending
};

/// Each feature against endpoint P. Requires every record to carry endpoint P.
/// A feature perfectly correlated with the target gets t = +/-inf and p = 0.
CorrelationReport correlation_report(const Dataset& dataset);

/// CSV with columns feature,r,t,p,stars.
void write_report_csv(const CorrelationReport& report, std::ostream& out);

}  // namespace phosforge::stats

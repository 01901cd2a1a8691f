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

#include "phosforge/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "phosforge/error.hpp"

namespace phosforge::stats {
namespace {

constexpr double kPFloor = 1e-300;
constexpr double kTiny = 1e-300;
constexpr double kCfEpsilon = 1e-16;
constexpr int kCfMaxIterations = 20000;

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kCfMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kCfEpsilon) return h;
  }
  throw Error("incomplete beta continued fraction did not converge");
}

// I_x(a, b) given both x and y = 1 - x, so callers holding an exact 1 - x keep
// full relative precision in the small tail.
double incomplete_beta_xy(double x, double y, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log(y);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(x, a, b) / a;
  }
  return 1.0 - front * beta_continued_fraction(y, b, a) / b;
}

std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("pearson_r: length mismatch (" + std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()) + ")");
  }
  const std::size_t n = x.size();
  if (n < 3) throw DataError("pearson_r needs at least 3 pairs");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DataError("pearson_r: constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double t_statistic(double r, std::size_t n) {
  if (n < 3) throw DataError("t statistic needs n >= 3");
  if (!(std::abs(r) < 1.0)) throw DataError("t statistic is infinite for |r| = 1");
  return r * std::sqrt(static_cast<double>(n - 2)) / std::sqrt(1.0 - r * r);
}

double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DataError("incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw DataError("incomplete beta needs x in [0, 1]");
  return incomplete_beta_xy(x, 1.0 - x, a, b);
}

double student_t_two_sided(double t, double dof) {
  if (!(dof > 0.0)) throw DataError("Student t needs positive degrees of freedom");
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  const double x = dof / (dof + t2);
  const double y = t2 / (dof + t2);
  return std::max(incomplete_beta_xy(x, y, 0.5 * dof, 0.5), kPFloor);
}

double p_value(double r, std::size_t n) {
  (void)t_statistic(r, n);  // validates |r| < 1 and n >= 3
  // With t from r, dof / (dof + t^2) reduces to 1 - r^2 exactly.
  const double dof = static_cast<double>(n - 2);
  const double r2 = r * r;
  return std::max(incomplete_beta_xy(1.0 - r2, r2, 0.5 * dof, 0.5), kPFloor);
}

Significance classify(double p) {
  if (p < 0.01) return Significance::kVerySignificant;
  if (p < 0.05) return Significance::kSignificant;
  return Significance::kNotSignificant;
}

std::string_view stars(Significance s) {
  switch (s) {
    case Significance::kVerySignificant:
      return "**";
    case Significance::kSignificant:
      return "*";
    case Significance::kNotSignificant:
      return "";
  }
  return "";
}

std::string_view to_string(Significance s) {
  switch (s) {
    case Significance::kVerySignificant:
      return "very_significant";
    case Significance::kSignificant:
      return "significant";
    case Significance::kNotSignificant:
      return "not_significant";
  }
  return "unknown";
}

CorrelationReport correlation_report(const Dataset& dataset) {
  const std::vector<double> target = dataset.target_column();
  CorrelationReport report;
  report.n = dataset.size();
  for (FeatureId id : kAllFeatures) {
    const std::vector<double> col = dataset.column(id);
    CorrelationEntry e{id, pearson_r(col, target), 0.0, 0.0, Significance::kVerySignificant};
    if (std::abs(e.r) < 1.0) {
      e.t = t_statistic(e.r, report.n);
      e.p = p_value(e.r, report.n);
    } else {
      e.t = std::copysign(std::numeric_limits<double>::infinity(), e.r);
      e.p = 0.0;
    }
    e.significance = classify(e.p);
    report.entries.push_back(e);
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const CorrelationEntry& a, const CorrelationEntry& b) {
                     return std::abs(a.r) > std::abs(b.r);
                   });
  return report;
}

void write_report_csv(const CorrelationReport& report, std::ostream& out) {
  out << "feature,r,t,p,stars\n";
  for (const auto& e : report.entries) {
    out << feature_name(e.feature) << ',' << fmt(e.r) << ',' << fmt(e.t) << ',' << fmt(e.p)
        << ',' << stars(e.significance) << '\n';
  }
}

}  // namespace phosforge::stats

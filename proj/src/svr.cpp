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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "phosforge/baselines.hpp"
#include "phosforge/error.hpp"
#include "phosforge/simd/kernels.hpp"

namespace phosforge::baselines {
namespace {

// Maximises phi(d) = lin * d - 0.5 * eta * d^2 - eps * (|bi + d| + |bj - d|)
// over d in [lo, hi]. phi is concave; the maximiser is among the clipped
// stationary points of the pieces between the kinks at -bi and bj, the
// interval ends and d = 0.
double best_step(double lin, double eta, double eps, double bi, double bj, double lo, double hi) {
  auto phi = [&](double d) {
    return lin * d - 0.5 * eta * d * d - eps * (std::abs(bi + d) + std::abs(bj - d));
  };
  std::array<double, 4> cuts = {lo, std::clamp(-bi, lo, hi), std::clamp(bj, lo, hi), hi};
  std::sort(cuts.begin(), cuts.end());

  double best_d = 0.0;
  double best_val = phi(0.0);
  auto consider = [&](double d) {
    const double v = phi(d);
    if (v > best_val) {
      best_val = v;
      best_d = d;
    }
  };
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s];
    const double b = cuts[s + 1];
    consider(a);
    consider(b);
    if (!(b > a) || !(eta > 0.0)) continue;
    const double mid = 0.5 * (a + b);
    const double si = (bi + mid) > 0.0 ? 1.0 : ((bi + mid) < 0.0 ? -1.0 : 0.0);
    const double sj = (bj - mid) > 0.0 ? 1.0 : ((bj - mid) < 0.0 ? -1.0 : 0.0);
    consider(std::clamp((lin - eps * (si - sj)) / eta, a, b));
  }
  return best_d;
}

}  // namespace

void SvrConfig::validate() const {
  if (!(C > 0.0)) throw DataError("SVR C must be > 0");
  if (!(gamma > 0.0)) throw DataError("SVR gamma must be > 0");
  if (!(epsilon_tube >= 0.0)) throw DataError("SVR epsilon tube must be >= 0");
  if (!(tol > 0.0)) throw DataError("SVR tolerance must be > 0");
  if (max_passes == 0) throw DataError("SVR max_passes must be >= 1");
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  return std::exp(-gamma * simd::squared_distance(a, b));
}

double svr_dual_objective(const Samples& data, std::span<const double> beta,
                          const SvrConfig& config) {
  const std::size_t n = data.size();
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    linear += data.y[i] * beta[i] - config.epsilon_tube * std::abs(beta[i]);
    if (beta[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (beta[j] == 0.0) continue;
      quad += beta[i] * beta[j] * rbf_kernel(data.row(i), data.row(j), config.gamma);
    }
  }
  return linear - 0.5 * quad;
}

SvrResult svr_train(const Samples& train_set, const SvrConfig& config) {
  config.validate();
  const std::size_t n = train_set.size();
  if (n < 2) throw DataError("SVR needs at least 2 training samples");
  const double C = config.C;
  const double eps = config.epsilon_tube;

  std::vector<double> K(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    K[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = rbf_kernel(train_set.row(i), train_set.row(j), config.gamma);
      K[i * n + j] = k;
      K[j * n + i] = k;
    }
  }

  std::vector<double> beta(n, 0.0);
  std::vector<double> grad(train_set.y);  // g_i = y_i - sum_k beta_k K_ik

  auto objective = [&]() {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      // y_i - F_i / 2 where F_i = y_i - g_i
      v += beta[i] * (0.5 * (train_set.y[i] + grad[i])) - eps * std::abs(beta[i]);
    }
    return v;
  };
  // Rate of objective change when raising beta_k, or lowering it (as -rate).
  auto up_rate = [&](std::size_t k) { return beta[k] >= 0.0 ? grad[k] - eps : grad[k] + eps; };
  auto down_rate = [&](std::size_t k) { return beta[k] > 0.0 ? grad[k] - eps : grad[k] + eps; };

  SvrResult result;
  SvrTrainReport& report = result.report;
  const std::size_t max_iter = config.max_passes * n;
  double violation = 0.0;
  for (;;) {
    std::size_t i = n;
    std::size_t j = n;
    double best_up = -std::numeric_limits<double>::infinity();
    double best_down = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (beta[k] < C) {
        const double u = up_rate(k);
        if (u > best_up) {
          best_up = u;
          i = k;
        }
      }
      if (beta[k] > -C) {
        const double d = down_rate(k);
        if (d < best_down) {
          best_down = d;
          j = k;
        }
      }
    }
    violation = (i < n && j < n) ? best_up - best_down : 0.0;
    if (violation <= config.tol || i == j) {
      report.converged = true;
      break;
    }
    if (report.iterations >= max_iter) break;

    const double eta = K[i * n + i] + K[j * n + j] - 2.0 * K[i * n + j];
    const double lo = std::max(-C - beta[i], beta[j] - C);
    const double hi = std::min(C - beta[i], beta[j] + C);
    const double d = best_step(grad[i] - grad[j], eta, eps, beta[i], beta[j], lo, hi);
    ++report.iterations;
    if (d != 0.0) {
      beta[i] = std::clamp(beta[i] + d, -C, C);
      beta[j] = std::clamp(beta[j] - d, -C, C);
      const double* ki = &K[i * n];
      const double* kj = &K[j * n];
      for (std::size_t k = 0; k < n; ++k) grad[k] -= d * (ki[k] - kj[k]);
    }
    if (report.iterations % n == 0) report.objective_trace.push_back(objective());
  }
  report.final_violation = std::max(violation, 0.0);
  report.objective_trace.push_back(objective());

  // Bias from free coefficients when available, else the midpoint of the
  // interval the bound coefficients allow.
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    if (beta[k] > 0.0 && beta[k] < C) {
      free_sum += grad[k] - eps;
      ++free_count;
    } else if (beta[k] < 0.0 && beta[k] > -C) {
      free_sum += grad[k] + eps;
      ++free_count;
    } else if (beta[k] == 0.0) {
      lower = std::max(lower, grad[k] - eps);
      upper = std::min(upper, grad[k] + eps);
    } else if (beta[k] >= C) {
      upper = std::min(upper, grad[k] - eps);
    } else {
      lower = std::max(lower, grad[k] + eps);
    }
  }
  double bias = 0.0;
  if (free_count > 0) {
    bias = free_sum / static_cast<double>(free_count);
  } else if (std::isfinite(lower) && std::isfinite(upper)) {
    bias = 0.5 * (lower + upper);
  } else if (std::isfinite(lower)) {
    bias = lower;
  } else if (std::isfinite(upper)) {
    bias = upper;
  }

  SvrModel& model = result.model;
  model.dim = train_set.dim;
  model.gamma = config.gamma;
  model.bias = bias;
  for (std::size_t k = 0; k < n; ++k) {
    if (beta[k] == 0.0) continue;
    const auto row = train_set.row(k);
    model.support_vectors.insert(model.support_vectors.end(), row.begin(), row.end());
    model.coefficients.push_back(beta[k]);
  }
  return result;
}

double svr_predict(const SvrModel& model, std::span<const double> x) {
  double out = model.bias;
  for (std::size_t i = 0; i < model.support_count(); ++i) {
    out += model.coefficients[i] * rbf_kernel(model.support_vector(i), x, model.gamma);
  }
  return out;
}

}  // namespace phosforge::baselines

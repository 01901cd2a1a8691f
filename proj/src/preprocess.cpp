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

#include "phosforge/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "phosforge/error.hpp"

namespace phosforge {

double quantile_sorted(std::span<const double> sorted, double p) {
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

Quartiles quartiles(std::span<const double> values) {
  if (values.size() < 4) {
    throw DataError("quartiles need at least 4 values, got " + std::to_string(values.size()));
  }
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw DataError("quartiles: non-finite value");
  }
  std::sort(sorted.begin(), sorted.end());
  Quartiles q;
  q.q1 = quantile_sorted(sorted, 0.25);
  q.q2 = quantile_sorted(sorted, 0.5);
  q.q3 = quantile_sorted(sorted, 0.75);
  q.iqr = q.q3 - q.q1;
  return q;
}

Fences tukey_fences(const Quartiles& q, double k) {
  return {q.q1 - k * q.iqr, q.q3 + k * q.iqr};
}

std::vector<bool> detect_outliers(const Dataset& dataset) {
  if (dataset.size() < 4) {
    throw DataError("outlier detection needs at least 4 records, got " +
                    std::to_string(dataset.size()));
  }
  const std::vector<double> target = dataset.target_column();
  std::vector<bool> mask(dataset.size(), false);

  auto flag_column = [&mask](const std::vector<double>& col) {
    const Fences f = tukey_fences(quartiles(col));
    for (std::size_t i = 0; i < col.size(); ++i) {
      if (f.outside(col[i])) mask[i] = true;
    }
  };
  for (FeatureId id : kAllFeatures) flag_column(dataset.column(id));
  flag_column(target);
  return mask;
}

CleanResult remove_outliers(const Dataset& dataset) {
  const std::vector<bool> mask = detect_outliers(dataset);
  CleanResult out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (mask[i]) {
      ++out.removed_count;
    } else {
      out.cleaned.add(dataset[i], Provenance::kCleaned);
    }
  }
  return out;
}

double NormParams::normalize(FeatureId id, double x) const {
  const Range& r = features[index_of(id)];
  return (x - r.min) / (r.max - r.min);
}

double NormParams::denormalize(FeatureId id, double z) const {
  const Range& r = features[index_of(id)];
  return r.min + z * (r.max - r.min);
}

double NormParams::normalize_target(double p) const {
  return (p - target.min) / (target.max - target.min);
}

double NormParams::denormalize_target(double z) const {
  return target.min + z * (target.max - target.min);
}

namespace {

Range min_max(const std::vector<double>& col) {
  const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
  return {*lo, *hi};
}

bool inside_unit(double z) { return z >= 0.0 && z <= 1.0; }

}  // namespace

NormParams fit_minmax(const Dataset& dataset) {
  if (dataset.empty()) throw DataError("cannot fit min-max scaling on an empty dataset");
  NormParams p;
  for (FeatureId id : kAllFeatures) {
    const Range r = min_max(dataset.column(id));
    if (!(r.max > r.min)) {
      throw DataError("feature " + std::string(feature_name(id)) +
                      " is constant; min-max scaling undefined");
    }
    p.features[index_of(id)] = r;
  }
  p.target = min_max(dataset.target_column());
  if (!(p.target.max > p.target.min)) {
    throw DataError("endpoint P is constant; min-max scaling undefined");
  }
  p.fitted_on = fingerprint(dataset);
  return p;
}

NormalizedRecord normalize(const HeatRecord& record, const NormParams& params) {
  NormalizedRecord out;
  const FeatureVector x = feature_vector(record);
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const FeatureId id = feature_at(i);
    out.z[i] = params.normalize(id, x[i]);
    if (!inside_unit(out.z[i])) out.out_of_range.push_back(id);
  }
  if (record.endpoint_p) out.target = params.normalize_target(*record.endpoint_p);
  return out;
}

NormalizedDataset normalize(const Dataset& dataset, const NormParams& params) {
  NormalizedDataset out;
  out.samples.x.reserve(dataset.size() * kFeatureCount);
  out.samples.y.reserve(dataset.size());
  out.heat_ids.reserve(dataset.size());
  for (const auto& record : dataset) {
    if (!record.endpoint_p) {
      throw DataError("heat '" + record.heat_id + "' has no measured endpoint P");
    }
    const NormalizedRecord n = normalize(record, params);
    out.samples.push(n.z, *n.target);
    out.heat_ids.push_back(record.heat_id);
    if (n.warning() || !inside_unit(*n.target)) out.out_of_range = true;
  }
  return out;
}

double denormalize(double z, FeatureId id, const NormParams& params) {
  return params.denormalize(id, z);
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Fisher-Yates, high to low.
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(idx[i - 1], idx[pick(rng)]);
  }
  return idx;
}

SplitResult split(const Dataset& dataset, const SplitSpec& spec) {
  if (spec.train < 0.0 || spec.val < 0.0 || spec.test < 0.0) {
    throw DataError("split fractions must be non-negative");
  }
  if (std::abs(spec.train + spec.val + spec.test - 1.0) > 1e-9) {
    throw DataError("split fractions must sum to 1");
  }
  if (!(spec.test > 0.0)) throw DataError("split needs a non-empty test fraction");
  if (dataset.size() < 10) {
    throw DataError("split needs at least 10 records, got " + std::to_string(dataset.size()));
  }

  const std::size_t n = dataset.size();
  // The small bias keeps fractions like 0.29 * 100 from flooring to 28.
  auto part = [n](double f) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 1e-9));
  };
  const std::size_t n_val = part(spec.val);
  const std::size_t n_test = part(spec.test);
  if (n_test == 0) throw DataError("split test fraction yields an empty test set");
  const std::size_t n_train = n - n_val - n_test;

  const std::vector<std::size_t> order = shuffled_indices(n, spec.seed);
  SplitResult out;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    Dataset& dst = k < n_train ? out.train : (k < n_train + n_val ? out.val : out.test);
    dst.add(dataset[i], dataset.provenance(i));
  }
  return out;
}

}  // namespace phosforge

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

// Box-plot outlier removal, min-max scaling and seeded train/val/test splits.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "phosforge/domain.hpp"
#include "phosforge/samples.hpp"

namespace phosforge {

struct Quartiles {
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
};

/// Linear-interpolation quantile of an ascending-sorted, non-empty list using
/// plotting position h = (n - 1) p.
double quantile_sorted(std::span<const double> sorted, double p);

/// Q1/median/Q3 of at least four finite values. Throws DataError otherwise.
Quartiles quartiles(std::span<const double> values);

struct Fences {
  double lower = 0.0;
  double upper = 0.0;
  /// Values strictly outside [lower, upper] are outliers.
  bool outside(double v) const { return v < lower || v > upper; }
};

Fences tukey_fences(const Quartiles& q, double k = 1.5);

/// One flag per record: true when any of the 12 features or the endpoint P
/// falls outside its column's Tukey fences computed over the whole dataset.
/// Requires at least four records, each with endpoint P.
std::vector<bool> detect_outliers(const Dataset& dataset);

struct CleanResult {
  Dataset cleaned;  // survivors, flagged Provenance::kCleaned, input order
  std::size_t removed_count = 0;
};

/// Single pass: fences from the input, applied once.
CleanResult remove_outliers(const Dataset& dataset);

struct Range {
  double min = 0.0;
  double max = 0.0;
};

/// Per-column min/max learned on a training set.
struct NormParams {
  std::array<Range, kFeatureCount> features{};
  Range target{};
  std::string fitted_on;  // dataset fingerprint

  double normalize(FeatureId id, double x) const;
  double denormalize(FeatureId id, double z) const;
  double normalize_target(double p) const;
  double denormalize_target(double z) const;
};

/// Throws DataError naming the first constant column (features, then target).
NormParams fit_minmax(const Dataset& dataset);

struct NormalizedRecord {
  FeatureVector z{};
  std::optional<double> target;
  std::vector<FeatureId> out_of_range;  // features whose z lies outside [0, 1]

  bool warning() const { return !out_of_range.empty(); }
};

NormalizedRecord normalize(const HeatRecord& record, const NormParams& params);

struct NormalizedDataset {
  Samples samples{kFeatureCount};
  std::vector<std::string> heat_ids;
  bool out_of_range = false;  // any feature or target outside [0, 1]
};

/// Requires endpoint P on every record.
NormalizedDataset normalize(const Dataset& dataset, const NormParams& params);

double denormalize(double z, FeatureId id, const NormParams& params);

struct SplitSpec {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;
  std::uint64_t seed = 0;
};

struct SplitResult {
  Dataset train;
  Dataset val;
  Dataset test;
};

/// Seeded Fisher-Yates shuffle followed by contiguous slicing into train, val
/// and test. Val and test sizes are floor(n * fraction); train takes the rest.
SplitResult split(const Dataset& dataset, const SplitSpec& spec);

/// The shuffled index order split() uses; exposed for tests.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

}  // namespace phosforge

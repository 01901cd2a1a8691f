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

// Heat dataset CSV I/O and the synthetic plant-data generator.
//
// CSV layout: UTF-8, comma separated, header on the first line. Columns
//
//   heat_id, scrap_weight_kg, c_scrap_wtpct, mn_scrap_wtpct, cr_scrap_wtpct,
//   si_scrap_wtpct, s_scrap_wtpct, o2_m3 | o2_ft3, lime_kg | lime_lb,
//   energy_kwh, deslag_temp_c, tap_temp_c, duration_min[, endpoint_p_wtpct]
//
// in any order. Oxygen in ft3 and lime in lb are converted to SI on read;
// write_csv always emits SI columns in model order.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "phosforge/domain.hpp"

namespace phosforge {

struct IngestError {
  std::size_t row = 0;  // 1-based data row (header excluded)
  std::string column;
  std::string reason;
};

struct IngestResult {
  Dataset dataset;
  std::vector<IngestError> errors;
};

/// Rows that fail to parse or validate are reported, never dropped silently.
/// Throws FormatError when the header is missing, repeats a column, names an
/// unknown column or lacks a required one.
IngestResult read_csv(std::istream& in);

/// Throws DataError on an empty dataset and Error when the stream fails.
void write_csv(const Dataset& dataset, std::ostream& out);

// --- synthetic data ---------------------------------------------------------

/// Observed distribution of one plant variable after cleaning.
struct VariableStats {
  double min;
  double max;
  double mean;
  double sd;
};

/// Plant statistics per feature, in FeatureId order.
const std::array<VariableStats, kFeatureCount>& plant_feature_stats();
const VariableStats& plant_endpoint_stats();
/// Pearson r of each feature against endpoint P in the plant data.
const std::array<double, kFeatureCount>& plant_correlations();

inline constexpr double kSyntheticPMin = 0.003;
inline constexpr double kSyntheticPMax = 0.018;
/// Synthetic features are also truncated to mean +/- this many standard
/// deviations, which keeps clean columns inside their box-plot fences.
inline constexpr double kSyntheticTailSd = 2.5;

struct SynthConfig {
  std::size_t n_records = 1700;
  double noise_sd = 0.0002;      // wt% P
  double outlier_fraction = 0.0;
  std::uint64_t seed = 1;
  /// Replaces the default latent coefficient (wt% P per feature standard
  /// deviation) of the listed features.
  std::map<FeatureId, double> coefficient_overrides;
  /// Weight of the duration*oxygen and Cr*S product terms; 0 keeps the latent
  /// function affine.
  double interaction_strength = 0.0;

  /// Throws DataError when a field is out of range.
  void validate() const;
};

/// Support, mean and sd of each feature's synthetic sampling distribution: the
/// plant Gaussian truncated to [min, max] and to mean +/- 2.5 sd.
const std::array<VariableStats, kFeatureCount>& synthetic_feature_stats();

/// Default latent coefficients: the plant correlations scaled so the noise-free
/// endpoint has the plant's standard deviation.
std::array<double, kFeatureCount> default_coefficients();

/// Latent coefficients after applying config overrides.
std::array<double, kFeatureCount> effective_coefficients(const SynthConfig& config);

/// Noise-free, unclipped endpoint P (wt%) of a feature vector: the plant mean
/// plus coef . z, where z standardises x with synthetic_feature_stats(), plus
/// the optional interaction terms.
double latent_endpoint(const FeatureVector& x, const std::array<double, kFeatureCount>& coef,
                       double interaction_strength = 0.0);

/// Deterministic for a fixed config. Features follow Gaussians with the plant
/// mean and sd truncated to [min, max] and to mean +/- 2.5 sd; endpoint
/// P = latent + N(0, noise_sd), clipped to [0.003, 0.018]. round(outlier_fraction * n) records then get one uniformly
/// chosen feature moved to Q3 + k * IQR of its column, k in {3, 5}.
/// Records are flagged Provenance::kSynthetic.
Dataset generate_synthetic(const SynthConfig& config);

}  // namespace phosforge

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

// Canonical data model for EAF heats: the twelve process inputs, one heat
// record, and an ordered dataset of heats.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace phosforge {

inline constexpr std::size_t kFeatureCount = 12;

/// Process inputs in their fixed model order x1..x12. The numeric value of each
/// enumerator is its position in every feature vector, model file and API.
enum class FeatureId : std::size_t {
  kScrapWeight = 0,
  kCarbonScrap,
  kManganeseScrap,
  kChromiumScrap,
  kSiliconScrap,
  kSulfurScrap,
  kInjectedOxygen,
  kInjectedLime,
  kEnergy,
  kDeslagTemp,
  kTapTemp,
  kDuration,
};

struct FeatureInfo {
  FeatureId id;
  std::string_view name;        // machine name used by the HTTP API
  std::string_view csv_column;  // canonical CSV header (SI units)
  std::string_view unit;
  std::string_view label;  // human readable
};

const std::array<FeatureInfo, kFeatureCount>& feature_table();
const FeatureInfo& feature_info(FeatureId id);
constexpr std::size_t index_of(FeatureId id) { return static_cast<std::size_t>(id); }
FeatureId feature_at(std::size_t index);
std::optional<FeatureId> feature_by_name(std::string_view name);
std::string_view feature_name(FeatureId id);

inline constexpr std::array<FeatureId, kFeatureCount> kAllFeatures = {
    FeatureId::kScrapWeight,    FeatureId::kCarbonScrap,  FeatureId::kManganeseScrap,
    FeatureId::kChromiumScrap,  FeatureId::kSiliconScrap, FeatureId::kSulfurScrap,
    FeatureId::kInjectedOxygen, FeatureId::kInjectedLime, FeatureId::kEnergy,
    FeatureId::kDeslagTemp,     FeatureId::kTapTemp,      FeatureId::kDuration,
};

// Unit conversions applied at ingestion; the core stores SI only.
inline constexpr double kCubicMetresPerCubicFoot = 0.0283168;
inline constexpr double kKilogramsPerPound = 0.453592;

// Sanity bands.
inline constexpr double kMinTemperatureC = 1000.0;  // exclusive
inline constexpr double kMaxTemperatureC = 2000.0;  // exclusive
inline constexpr double kMaxEndpointP = 0.1;        // wt%, inclusive

/// wt% to ppm.
inline constexpr double kPpmPerWtPct = 1e4;

using FeatureVector = std::array<double, kFeatureCount>;

/// One furnace heat. Features are addressed by FeatureId; a feature may be
/// absent while a record is being assembled (validate_record reports it).
struct HeatRecord {
  std::string heat_id;
  std::array<std::optional<double>, kFeatureCount> features{};
  std::optional<double> endpoint_p;  // wt%

  std::optional<double> get(FeatureId id) const { return features[index_of(id)]; }
  HeatRecord& set(FeatureId id, double value) {
    features[index_of(id)] = value;
    return *this;
  }
};

struct Violation {
  std::string field;
  std::optional<double> value;
  std::string rule;
};

/// Every invariant a HeatRecord fails; empty when the record is usable.
std::vector<Violation> validate_record(const HeatRecord& record);

/// Features in FeatureId order. Throws DataError if a feature is missing.
FeatureVector feature_vector(const HeatRecord& record);

/// Inverse of feature_vector.
HeatRecord record_from_vector(std::string heat_id, const FeatureVector& values,
                              std::optional<double> endpoint_p = std::nullopt);

enum class Provenance { kRaw, kCleaned, kSynthetic };

std::string_view to_string(Provenance p);

/// Ordered collection of heats with unique ids. Iteration order is insertion
/// order.
class Dataset {
 public:
  Dataset() = default;

  /// Throws DataError when the heat id is already present.
  void add(HeatRecord record, Provenance provenance);

  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const HeatRecord& operator[](std::size_t i) const { return records_[i]; }
  Provenance provenance(std::size_t i) const { return provenance_[i]; }
  std::span<const HeatRecord> records() const { return records_; }
  bool contains(const std::string& heat_id) const { return ids_.contains(heat_id); }

  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }

  /// Values of one feature column in record order.
  std::vector<double> column(FeatureId id) const;
  /// Endpoint P column; throws DataError naming the first record without one.
  std::vector<double> target_column() const;

 private:
  std::vector<HeatRecord> records_;
  std::vector<Provenance> provenance_;
  std::unordered_set<std::string> ids_;
};

/// Stable 64-bit FNV-1a digest (hex) of heat ids, features and targets, used to
/// tie fitted parameters and models to the data they were fitted on.
std::string fingerprint(const Dataset& dataset);

}  // namespace phosforge

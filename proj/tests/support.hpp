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


// Shared fixtures for the unit tests.

#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "phosforge/domain.hpp"
#include "phosforge/ingest.hpp"

namespace phosforge::testing {

/// Plant means for every feature and endpoint P.
inline HeatRecord mean_heat(std::string id = "H1") {
  FeatureVector v{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) v[i] = plant_feature_stats()[i].mean;
  return record_from_vector(std::move(id), v, plant_endpoint_stats().mean);
}

/// n distinct heats with features spread across the plant ranges.
inline Dataset spread_dataset(std::size_t n, std::uint64_t seed = 11) {
  std::mt19937_64 rng(seed);
  Dataset d;
  for (std::size_t r = 0; r < n; ++r) {
    FeatureVector v{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      const auto& s = synthetic_feature_stats()[i];
      v[i] = std::uniform_real_distribution<double>(s.min, s.max)(rng);
    }
    const double p = std::uniform_real_distribution<double>(0.003, 0.018)(rng);
    d.add(record_from_vector("T" + std::to_string(r), v, p), Provenance::kRaw);
  }
  return d;
}

}  // namespace phosforge::testing

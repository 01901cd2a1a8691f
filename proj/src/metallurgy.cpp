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


#include "phosforge/metallurgy.hpp"

#include <cmath>
#include <string>

#include "phosforge/error.hpp"

namespace phosforge::metallurgy {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DataError(std::string(name) + " must be a finite value > 0");
  }
}

void require_non_negative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DataError(std::string(name) + " must be a finite value >= 0");
  }
}

}  // namespace

PartitionResult partition_coefficient(const SlagMetalState& state) {
  require_positive(state.pct_p_metal, "metal P");
  require_non_negative(state.pct_p_slag, "slag P");
  const double l_p = state.pct_p_slag / state.pct_p_metal;
  return {l_p, l_p < kTypicalLpMin || l_p > kTypicalLpMax};
}

double phosphate_capacity_gas(const SlagMetalState& state) {
  if (!state.pct_po4_slag) throw DataError("slag PO4 content is required");
  require_non_negative(*state.pct_po4_slag, "slag PO4");
  require_positive(state.p_p2, "P2 partial pressure");
  require_positive(state.p_o2, "O2 partial pressure");
  return *state.pct_po4_slag / (std::sqrt(state.p_p2) * std::pow(state.p_o2, 1.25));
}

std::optional<double> phosphate_capacity_ionic(const SlagMetalState& state) {
  if (!state.K2 || !state.a_o2minus || !state.gamma0_po4) return std::nullopt;
  require_non_negative(*state.a_o2minus, "oxide-ion activity");
  require_positive(*state.gamma0_po4, "PO4 activity coefficient");
  return *state.K2 * std::pow(*state.a_o2minus, 1.5) / *state.gamma0_po4;
}

double phosphate_capacity_from_partition(const SlagMetalState& state, double l_p) {
  require_positive(state.f_p, "f_p");
  require_positive(state.p_o2, "O2 partial pressure");
  return l_p * state.k_p / (state.f_p * std::pow(state.p_o2, 1.25));
}

double partition_from_capacity(const SlagMetalState& state, double capacity) {
  require_positive(state.k_p, "k_p");
  require_positive(state.f_p, "f_p");
  require_positive(state.p_o2, "O2 partial pressure");
  return capacity * state.f_p * std::pow(state.p_o2, 1.25) / state.k_p;
}

}  // namespace phosforge::metallurgy

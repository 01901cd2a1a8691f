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


// Dephosphorisation quantities for slag/metal equilibria.
//
//   L_p = (%P) / [%P]                                  partition coefficient
//   C   = (%PO4) / (P_P2^(1/2) P_O2^(5/4))             phosphate capacity, gas route
//       = K2 a_O^(3/2) / gamma0_PO4                    optional cross-check
//   C   = L_p k_p / (f_p P_O2^(5/4))                   capacity from L_p
//
// Pressures are in atm; concentrations in wt%.

#pragma once

#include <optional>

namespace phosforge::metallurgy {

struct SlagMetalState {
  double pct_p_slag = 0.0;
  double pct_p_metal = 0.0;
  std::optional<double> pct_po4_slag;
  double p_o2 = 1.0;
  double p_p2 = 1.0;
  double k_p = 1.0;
  double f_p = 1.0;
  std::optional<double> K2;
  std::optional<double> a_o2minus;
  std::optional<double> gamma0_po4;
};

inline constexpr double kTypicalLpMin = 5.0;
inline constexpr double kTypicalLpMax = 15.0;

struct PartitionResult {
  double l_p = 0.0;
  bool out_of_band = false;  // outside [5, 15]
};

/// Throws DataError unless pct_p_metal > 0 and pct_p_slag >= 0.
PartitionResult partition_coefficient(const SlagMetalState& state);

/// Throws DataError when pct_po4_slag is missing or a pressure is not positive.
double phosphate_capacity_gas(const SlagMetalState& state);

/// K2 a_O^(3/2) / gamma0; nullopt unless all three constants are given.
std::optional<double> phosphate_capacity_ionic(const SlagMetalState& state);

/// Throws DataError unless f_p > 0 and p_o2 > 0.
double phosphate_capacity_from_partition(const SlagMetalState& state, double l_p);

/// Inverse of phosphate_capacity_from_partition; throws DataError unless k_p > 0.
double partition_from_capacity(const SlagMetalState& state, double capacity);

}  // namespace phosforge::metallurgy

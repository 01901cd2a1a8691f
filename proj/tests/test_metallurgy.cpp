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


#include <cmath>
#include <random>

#include "doctest.h"

#include "phosforge/error.hpp"
#include "phosforge/metallurgy.hpp"

using namespace phosforge;
using namespace phosforge::metallurgy;

namespace {

SlagMetalState state(double slag, double metal) {
  SlagMetalState s;
  s.pct_p_slag = slag;
  s.pct_p_metal = metal;
  return s;
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

}  // namespace

TEST_SUITE("metallurgy") {
  TEST_CASE("partition coefficient examples") {
    const PartitionResult a = partition_coefficient(state(0.10, 0.01));
    CHECK(a.l_p == doctest::Approx(10.0).epsilon(1e-15));
    CHECK_FALSE(a.out_of_band);
    const PartitionResult b = partition_coefficient(state(0.02, 0.01));
    CHECK(b.l_p == 2.0);
    CHECK(b.out_of_band);
    CHECK_FALSE(partition_coefficient(state(0.05, 0.01)).out_of_band);
    CHECK_FALSE(partition_coefficient(state(0.15, 0.01)).out_of_band);
    CHECK(partition_coefficient(state(0.16, 0.01)).out_of_band);
    CHECK_THROWS_AS(partition_coefficient(state(0.1, 0.0)), DataError);
    CHECK_THROWS_AS(partition_coefficient(state(0.1, -0.01)), DataError);
    CHECK_THROWS_AS(partition_coefficient(state(-0.1, 0.01)), DataError);
  }

  TEST_CASE("partition coefficient is scale free") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.001, 1.0);
    for (int i = 0; i < 200; ++i) {
      const double s = u(rng);
      const double m = u(rng);
      const double k = 1.0 + 50.0 * u(rng);
      CHECK(close(partition_coefficient(state(k * s, k * m)).l_p,
                  partition_coefficient(state(s, m)).l_p, 1e-14));
    }
  }

  TEST_CASE("gas-route capacity") {
    SlagMetalState s;
    s.pct_po4_slag = 1.0;
    CHECK(phosphate_capacity_gas(s) == 1.0);
    s.pct_po4_slag = 2.0;
    s.p_p2 = 4.0;
    CHECK(phosphate_capacity_gas(s) == 1.0);
    s.p_o2 = 0.0;
    CHECK_THROWS_AS(phosphate_capacity_gas(s), DataError);
    s = SlagMetalState{};
    CHECK_THROWS_AS(phosphate_capacity_gas(s), DataError);
    s.pct_po4_slag = 1.0;
    s.p_p2 = -1.0;
    CHECK_THROWS_AS(phosphate_capacity_gas(s), DataError);
  }

  TEST_CASE("ionic cross-check needs all constants") {
    SlagMetalState s;
    CHECK_FALSE(phosphate_capacity_ionic(s).has_value());
    s.K2 = 3.0;
    s.a_o2minus = 4.0;
    CHECK_FALSE(phosphate_capacity_ionic(s).has_value());
    s.gamma0_po4 = 2.0;
    REQUIRE(phosphate_capacity_ionic(s).has_value());
    CHECK(*phosphate_capacity_ionic(s) == doctest::Approx(12.0).epsilon(1e-15));
  }

  TEST_CASE("capacity from partition") {
    SlagMetalState s;
    CHECK(phosphate_capacity_from_partition(s, 10.0) == 10.0);
    const double base = phosphate_capacity_from_partition(s, 7.0);
    s.p_o2 = 2.0;
    const double doubled = phosphate_capacity_from_partition(s, 7.0);
    CHECK(std::abs(base / doubled - std::pow(2.0, 1.25)) <= 1e-12);
    CHECK(std::pow(2.0, 1.25) == doctest::Approx(2.3784).epsilon(1e-4));
    s.f_p = 0.0;
    CHECK_THROWS_AS(phosphate_capacity_from_partition(s, 7.0), DataError);
    s.f_p = 1.0;
    s.p_o2 = 0.0;
    CHECK_THROWS_AS(phosphate_capacity_from_partition(s, 7.0), DataError);
    s.p_o2 = 1.0;
    s.k_p = 0.0;
    CHECK_THROWS_AS(partition_from_capacity(s, 3.0), DataError);
  }

  TEST_CASE("capacity is linear in L_p and k_p and round-trips") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.05, 20.0);
    for (int i = 0; i < 500; ++i) {
      SlagMetalState s;
      s.p_o2 = u(rng) * 1e-3;
      s.k_p = u(rng);
      s.f_p = u(rng);
      const double l = u(rng);
      const double c = phosphate_capacity_from_partition(s, l);
      CHECK(close(partition_from_capacity(s, c), l, 1e-12));
      CHECK(close(phosphate_capacity_from_partition(s, 3.0 * l), 3.0 * c, 1e-14));
      SlagMetalState t = s;
      t.k_p *= 2.5;
      CHECK(close(phosphate_capacity_from_partition(t, l), 2.5 * c, 1e-14));
      t = s;
      t.p_o2 *= 2.0;
      CHECK(close(c / phosphate_capacity_from_partition(t, l), std::pow(2.0, 1.25), 1e-12));
    }
  }

  TEST_CASE("both capacity routes agree on a consistent state") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    for (int i = 0; i < 200; ++i) {
      SlagMetalState s = state(u(rng) * 0.01, u(rng) * 0.002);
      s.p_o2 = u(rng) * 1e-2;
      s.p_p2 = u(rng) * 1e-3;
      s.k_p = u(rng);
      s.f_p = u(rng);
      const double c = phosphate_capacity_from_partition(s, partition_coefficient(s).l_p);
      s.pct_po4_slag = c * std::sqrt(s.p_p2) * std::pow(s.p_o2, 1.25);
      CHECK(close(phosphate_capacity_gas(s), c, 1e-12));
    }
  }
}

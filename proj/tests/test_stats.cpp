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
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "doctest.h"
#include "support.hpp"

#include "phosforge/error.hpp"
#include "phosforge/stats.hpp"

using namespace phosforge;
using namespace phosforge::stats;

TEST_SUITE("stats") {
  TEST_CASE("pearson examples") {
    const std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x) y.push_back(2 * v + 1);
    CHECK(pearson_r(x, y) == doctest::Approx(1.0).epsilon(1e-14));
    std::vector<double> neg;
    for (double v : x) neg.push_back(-v);
    CHECK(pearson_r(x, neg) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(pearson_r(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}) ==
          doctest::Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("pearson errors") {
    CHECK_THROWS_AS(pearson_r(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DataError);
    CHECK_THROWS_AS(pearson_r(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}),
                    DataError);
    CHECK_THROWS_AS(pearson_r(std::vector<double>{4, 4, 4}, std::vector<double>{1, 2, 3}),
                    DataError);
  }

  TEST_CASE("pearson symmetry and affine invariance") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> x(30), y(30), xs(30), yneg(30);
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = g(rng);
        y[i] = 0.3 * x[i] + g(rng);
        xs[i] = 7.5 * x[i] - 40.0;
        yneg[i] = -y[i];
      }
      const double r = pearson_r(x, y);
      CHECK(r >= -1.0);
      CHECK(r <= 1.0);
      CHECK(std::abs(pearson_r(y, x) - r) <= 1e-12);
      CHECK(std::abs(pearson_r(xs, y) - r) <= 1e-12);
      CHECK(std::abs(pearson_r(x, yneg) + r) <= 1e-12);
    }
  }

  TEST_CASE("t statistic") {
    CHECK(t_statistic(0.0, 50) == 0.0);
    CHECK(t_statistic(0.255, 1005) == doctest::Approx(8.35).epsilon(1e-3));
    CHECK(t_statistic(0.5, 6) == doctest::Approx(1.0 / std::sqrt(0.75)).epsilon(1e-14));
    CHECK(t_statistic(-0.5, 6) < 0.0);
    CHECK_THROWS_AS(t_statistic(1.0, 10), DataError);
    CHECK_THROWS_AS(t_statistic(-1.0, 10), DataError);
    CHECK_THROWS_AS(t_statistic(0.3, 2), DataError);
  }

  TEST_CASE("p-value anchors") {
    CHECK(p_value(0.0, 100) == doctest::Approx(1.0).epsilon(1e-14));
    const double p1 = p_value(0.255, 1005);
    CHECK(p1 >= 5e-17);
    CHECK(p1 <= 5e-16);
    const double p2 = p_value(0.17, 1005);
    CHECK(p2 >= 2e-8);
    CHECK(p2 <= 3e-7);
    CHECK(p_value(-0.17, 1005) == p2);
  }

  TEST_CASE("incomplete beta matches boost") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ab(0.2, 600.0);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
      const double a = ab(rng);
      const double b = ab(rng);
      const double x = ux(rng);
      const double expect = boost::math::ibeta(a, b, x);
      const double got = incomplete_beta(x, a, b);
      CHECK(std::abs(got - expect) <= 1e-10 * std::max(expect, 1e-300) + 1e-300);
    }
    CHECK(incomplete_beta(0.0, 2.0, 3.0) == 0.0);
    CHECK(incomplete_beta(1.0, 2.0, 3.0) == 1.0);
    CHECK_THROWS_AS(incomplete_beta(1.5, 2.0, 3.0), DataError);
    CHECK_THROWS_AS(incomplete_beta(0.5, 0.0, 3.0), DataError);
  }

  TEST_CASE("incomplete beta reflection identity") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> ab(0.1, 100.0);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
      const double a = ab(rng);
      const double b = ab(rng);
      const double x = ux(rng);
      CHECK(std::abs(incomplete_beta(x, a, b) + incomplete_beta(1.0 - x, b, a) - 1.0) <= 1e-10);
    }
  }

  TEST_CASE("student t tail matches boost") {
    for (double dof : {1.0, 2.0, 5.0, 30.0, 1003.0}) {
      const boost::math::students_t dist(dof);
      for (double t : {0.0, 0.1, 0.7, 1.5, 2.5, 4.0, 9.0}) {
        const double expect = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
        const double got = student_t_two_sided(t, dof);
        CHECK(std::abs(got - expect) <= 1e-10 * expect);
        CHECK(student_t_two_sided(-t, dof) == got);
      }
    }
    CHECK(student_t_two_sided(1e6, 1003.0) == 1e-300);
  }

  TEST_CASE("p-value decreases in |r|") {
    for (std::size_t n : {10u, 30u, 100u}) {
      double prev = 2.0;
      for (int k = 0; k <= 19; ++k) {
        const double p = p_value(0.05 * k, n);
        CHECK(p < prev);
        prev = p;
      }
    }
    // Large n reaches the 1e-300 floor, so only monotone there.
    double prev = 2.0;
    for (int k = 0; k <= 19; ++k) {
      const double p = p_value(0.05 * k, 1005);
      CHECK(p <= prev);
      prev = p;
    }
  }

  TEST_CASE("significance classes") {
    CHECK(classify(0.0) == Significance::kVerySignificant);
    CHECK(classify(std::nextafter(0.01, 0.0)) == Significance::kVerySignificant);
    CHECK(classify(0.01) == Significance::kSignificant);
    CHECK(classify(std::nextafter(0.05, 0.0)) == Significance::kSignificant);
    CHECK(classify(0.05) == Significance::kNotSignificant);
    CHECK(classify(1.0) == Significance::kNotSignificant);
    CHECK(stars(Significance::kVerySignificant) == "**");
    CHECK(stars(Significance::kSignificant) == "*");
    CHECK(stars(Significance::kNotSignificant) == "");
  }

  TEST_CASE("feature copying the target comes first with r = 1") {
    Dataset d;
    const Dataset base = testing::spread_dataset(50);
    for (const auto& r : base) {
      HeatRecord c = r;
      c.set(FeatureId::kSiliconScrap, *r.endpoint_p);
      d.add(c, Provenance::kRaw);
    }
    const CorrelationReport rep = correlation_report(d);
    CHECK(rep.n == 50);
    REQUIRE(rep.entries.size() == kFeatureCount);
    CHECK(rep.entries[0].feature == FeatureId::kSiliconScrap);
    CHECK(rep.entries[0].r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isinf(rep.entries[0].t));
    CHECK(rep.entries[0].p == 0.0);
    for (std::size_t i = 1; i < rep.entries.size(); ++i) {
      CHECK(std::abs(rep.entries[i].r) <= std::abs(rep.entries[i - 1].r));
    }
  }

  TEST_CASE("noise-free synthetic signs follow the generator") {
    SynthConfig c;
    c.n_records = 5000;
    c.noise_sd = 0.0;
    const CorrelationReport rep = correlation_report(generate_synthetic(c));
    const auto coef = default_coefficients();
    for (const auto& e : rep.entries) {
      if (std::abs(plant_correlations()[index_of(e.feature)]) <= 0.05) continue;
      CHECK_MESSAGE((e.r > 0) == (coef[index_of(e.feature)] > 0), feature_name(e.feature));
      CHECK((e.t > 0) == (e.r > 0));
    }
  }

  TEST_CASE("duration is very significant at n = 1005") {
    SynthConfig c;
    c.n_records = 1005;
    const CorrelationReport rep = correlation_report(generate_synthetic(c));
    for (const auto& e : rep.entries) {
      if (e.feature == FeatureId::kDuration) {
        CHECK(e.significance == Significance::kVerySignificant);
      }
    }
  }

  TEST_CASE("report CSV") {
    SynthConfig c;
    c.n_records = 200;
    std::ostringstream out;
    write_report_csv(correlation_report(generate_synthetic(c)), out);
    const std::string s = out.str();
    CHECK(s.rfind("feature,r,t,p,stars\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 13);
  }
}

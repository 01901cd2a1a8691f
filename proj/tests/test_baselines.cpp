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
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "doctest.h"

#include "phosforge/baselines.hpp"
#include "phosforge/error.hpp"

using namespace phosforge;
using namespace phosforge::baselines;

namespace {

// Exhaustive CART: every feature, every midpoint between consecutive distinct
// values, child SSE computed directly from the member targets.
struct OracleBuilder {
  const Samples& data;
  const ForestConfig& config;
  Tree tree;

  static double sse(const Samples& d, const std::vector<std::size_t>& rows) {
    double mean = 0.0;
    for (std::size_t r : rows) mean += d.y[r];
    mean /= static_cast<double>(rows.size());
    double s = 0.0;
    for (std::size_t r : rows) s += (d.y[r] - mean) * (d.y[r] - mean);
    return s;
  }

  std::uint32_t grow(const std::vector<std::size_t>& rows, std::size_t depth) {
    const auto id = static_cast<std::uint32_t>(tree.nodes.size());
    tree.nodes.emplace_back();
    double sum = 0.0;
    for (std::size_t r : rows) sum += data.y[r];
    tree.nodes[id].value = sum / static_cast<double>(rows.size());

    const bool pure = std::all_of(rows.begin(), rows.end(),
                                  [&](std::size_t r) { return data.y[r] == data.y[rows[0]]; });
    if ((config.max_depth && depth >= *config.max_depth) || rows.size() < config.min_samples_split ||
        pure) {
      return id;
    }
    const double tol = split_tie_tolerance(sse(data, rows));
    bool found = false;
    double best = 0.0;
    std::size_t best_f = 0;
    double best_t = 0.0;
    for (std::size_t f = 0; f < data.dim; ++f) {
      std::vector<double> values;
      for (std::size_t r : rows) values.push_back(data.row(r)[f]);
      std::sort(values.begin(), values.end());
      values.erase(std::unique(values.begin(), values.end()), values.end());
      for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        const double t = 0.5 * (values[k] + values[k + 1]);
        std::vector<std::size_t> l, r;
        for (std::size_t row : rows) (data.row(row)[f] <= t ? l : r).push_back(row);
        if (l.size() < config.min_samples_leaf || r.size() < config.min_samples_leaf) continue;
        const double s = sse(data, l) + sse(data, r);
        if (!found || s < best - tol) {
          found = true;
          best = s;
          best_f = f;
          best_t = t;
        }
      }
    }
    if (!found) return id;
    std::vector<std::size_t> l, r;
    for (std::size_t row : rows) (data.row(row)[best_f] <= best_t ? l : r).push_back(row);
    tree.nodes[id].feature = static_cast<std::uint32_t>(best_f);
    tree.nodes[id].threshold = best_t;
    const auto li = grow(l, depth + 1);
    const auto ri = grow(r, depth + 1);
    tree.nodes[id].left = li;
    tree.nodes[id].right = ri;
    return id;
  }
};

bool same_tree(const Tree& a, const Tree& b) {
  if (a.nodes.size() != b.nodes.size()) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const TreeNode& x = a.nodes[i];
    const TreeNode& y = b.nodes[i];
    if (x.is_leaf() != y.is_leaf()) return false;
    if (std::abs(x.value - y.value) > 1e-12) return false;
    if (!x.is_leaf() && (x.feature != y.feature || x.threshold != y.threshold ||
                         x.left != y.left || x.right != y.right)) {
      return false;
    }
  }
  return true;
}

Samples random_grid_samples(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> cell(0, 4);
  std::uniform_int_distribution<int> level(0, 3);
  Samples s(2);
  for (std::size_t i = 0; i < n; ++i) {
    const double x[2] = {0.25 * cell(rng), 0.25 * cell(rng)};
    s.push(x, 0.1 * level(rng));
  }
  return s;
}

Samples random_samples(std::size_t n, std::size_t dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Samples s(dim);
  std::vector<double> x(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : x) v = u(rng);
    s.push(x, 0.2 + 0.5 * x[0] * x[0] + 0.1 * std::sin(6.0 * x[dim - 1]));
  }
  return s;
}

ForestConfig single_tree() {
  ForestConfig c;
  c.n_trees = 1;
  c.bootstrap = false;
  return c;
}

}  // namespace

TEST_SUITE("baselines") {
  TEST_CASE("forest config validation") {
    ForestConfig c;
    CHECK_NOTHROW(c.validate());
    c.n_trees = 0;
    CHECK_THROWS_AS(c.validate(), DataError);
    c = ForestConfig{};
    c.feature_fraction = 0.0;
    CHECK_THROWS_AS(c.validate(), DataError);
    c = ForestConfig{};
    c.min_samples_leaf = 0;
    CHECK_THROWS_AS(c.validate(), DataError);
    CHECK_THROWS_AS(rf_train(Samples(2), ForestConfig{}), DataError);
  }

  TEST_CASE("CART matches the exhaustive oracle on small grids") {
    std::mt19937_64 rng(17);
    std::size_t compared = 0;
    for (std::size_t n = 1; n <= 8; ++n) {
      for (int trial = 0; trial < 1500; ++trial) {
        const Samples s = random_grid_samples(n, rng);
        std::vector<std::size_t> rows(n);
        std::iota(rows.begin(), rows.end(), std::size_t{0});
        for (const ForestConfig& c : {single_tree(), [] {
                                        ForestConfig k = single_tree();
                                        k.min_samples_leaf = 2;
                                        k.max_depth = 2;
                                        return k;
                                      }()}) {
          OracleBuilder oracle{s, c, {}};
          oracle.grow(rows, 0);
          const Tree got = grow_tree(s, rows, c, 5);
          if (!same_tree(got, oracle.tree)) FAIL("tree mismatch at n = " << n);
          ++compared;
        }
      }
    }
    CHECK(compared == 8 * 1500 * 2);
  }

  TEST_CASE("5-point single tree interpolates distinct training inputs") {
    Samples s(2);
    const double pts[5][3] = {
        {0.1, 0.9, 0.3}, {0.4, 0.2, 0.8}, {0.7, 0.5, 0.1}, {0.2, 0.6, 0.6}, {0.9, 0.1, 0.4}};
    for (const auto& p : pts) s.push(std::span<const double>(p, 2), p[2]);
    const Forest f = rf_train(s, single_tree());
    REQUIRE(f.trees.size() == 1);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(rf_predict(f, s.row(i)) == s.y[i]);
    std::vector<std::size_t> rows{0, 1, 2, 3, 4};
    OracleBuilder oracle{s, single_tree(), {}};
    oracle.grow(rows, 0);
    CHECK(same_tree(f.trees[0], oracle.tree));
  }

  TEST_CASE("min_samples_leaf = n gives single-leaf trees") {
    std::mt19937_64 rng(2);
    const Samples s = random_samples(30, 3, rng);
    ForestConfig c;
    c.n_trees = 5;
    c.bootstrap = false;
    c.min_samples_leaf = 30;
    const Forest f = rf_train(s, c);
    const double mean = std::accumulate(s.y.begin(), s.y.end(), 0.0) / 30.0;
    for (const Tree& t : f.trees) {
      CHECK(t.nodes.size() == 1);
      CHECK(t.depth() == 0);
    }
    CHECK(rf_predict(f, s.row(3)) == doctest::Approx(mean).epsilon(1e-14));
  }

  TEST_CASE("forest averages its trees") {
    Forest f;
    f.dim = 1;
    Tree a;
    a.nodes.push_back({});
    a.nodes[0].value = 0.2;
    Tree b = a;
    b.nodes[0].value = 0.4;
    f.trees = {a, b};
    const double x[1] = {0.5};
    CHECK(rf_predict(f, x) == doctest::Approx(0.3).epsilon(1e-15));
    f.trees = {a, a, a};
    CHECK(rf_predict(f, x) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK_THROWS_AS(rf_predict(Forest{}, x), DataError);
  }

  TEST_CASE("forest is deterministic and bounded by its leaves") {
    std::mt19937_64 rng(3);
    const Samples s = random_samples(120, 4, rng);
    ForestConfig c;
    c.n_trees = 20;
    c.feature_fraction = 0.5;
    c.seed = 11;
    const Forest a = rf_train(s, c);
    const Forest b = rf_train(s, c);
    REQUIRE(a.trees.size() == b.trees.size());
    for (std::size_t t = 0; t < a.trees.size(); ++t) CHECK(same_tree(a.trees[t], b.trees[t]));
    c.seed = 12;
    CHECK_FALSE(same_tree(rf_train(s, c).trees[0], a.trees[0]));

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Tree& t : a.trees) {
      for (const TreeNode& n : t.nodes) {
        if (!n.is_leaf()) continue;
        lo = std::min(lo, n.value);
        hi = std::max(hi, n.value);
      }
    }
    std::uniform_real_distribution<double> u(-0.5, 1.5);
    for (int i = 0; i < 200; ++i) {
      const double x[4] = {u(rng), u(rng), u(rng), u(rng)};
      const double p = rf_predict(a, x);
      CHECK(p >= lo);
      CHECK(p <= hi);
    }
  }

  TEST_CASE("max_depth caps tree depth") {
    std::mt19937_64 rng(4);
    const Samples s = random_samples(200, 3, rng);
    ForestConfig c = single_tree();
    c.max_depth = 3;
    CHECK(rf_train(s, c).trees[0].depth() <= 3);
  }

  TEST_CASE("RBF kernel") {
    const double a[2] = {0.3, 0.7};
    const double b[2] = {0.5, 0.2};
    CHECK(rbf_kernel(a, a, 3.0) == 1.0);
    CHECK(rbf_kernel(a, b, 2.0) == doctest::Approx(std::exp(-2.0 * 0.29)).epsilon(1e-15));
  }

  TEST_CASE("SVR config validation") {
    SvrConfig c;
    CHECK_NOTHROW(c.validate());
    c.C = 0.0;
    CHECK_THROWS_AS(c.validate(), DataError);
    c = SvrConfig{};
    c.gamma = -1.0;
    CHECK_THROWS_AS(c.validate(), DataError);
    c = SvrConfig{};
    c.epsilon_tube = -0.1;
    CHECK_THROWS_AS(c.validate(), DataError);
  }

  TEST_CASE("wide tube gives no support vectors") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      Samples s = random_samples(25, 3, rng);
      const auto [lo, hi] = std::minmax_element(s.y.begin(), s.y.end());
      SvrConfig c;
      c.epsilon_tube = 0.6 * (*hi - *lo) + 1e-3;
      const SvrResult r = svr_train(s, c);
      CHECK(r.report.converged);
      CHECK(r.model.support_count() == 0);
      for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(std::abs(svr_predict(r.model, s.row(i)) - s.y[i]) <= c.epsilon_tube);
      }
      CHECK(svr_predict(r.model, s.row(0)) == r.model.bias);
    }
  }

  TEST_CASE("4-point dual agrees with a brute-force grid") {
    Samples s(1);
    const double xs[4] = {0.0, 0.3, 0.6, 1.0};
    const double ys[4] = {0.1, 0.8, 0.2, 0.9};
    for (int i = 0; i < 4; ++i) s.push(std::span<const double>(&xs[i], 1), ys[i]);
    SvrConfig c;
    c.C = 0.2;
    c.gamma = 2.0;
    c.epsilon_tube = 0.05;
    c.tol = 1e-9;
    const SvrResult r = svr_train(s, c);
    CHECK(r.report.converged);

    double K[4][4];
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) K[i][j] = std::exp(-c.gamma * (xs[i] - xs[j]) * (xs[i] - xs[j]));
    }
    auto objective = [&](const double* b) {
      double v = 0.0;
      for (int i = 0; i < 4; ++i) {
        v += ys[i] * b[i] - c.epsilon_tube * std::abs(b[i]);
        for (int j = 0; j < 4; ++j) v -= 0.5 * b[i] * b[j] * K[i][j];
      }
      return v;
    };
    double grid_best = -std::numeric_limits<double>::infinity();
    const int steps = static_cast<int>(std::lround(2 * c.C / 1e-3));
    for (int a = 0; a <= steps; ++a) {
      for (int b = 0; b <= steps; ++b) {
        for (int d = 0; d <= steps; ++d) {
          double beta[4] = {-c.C + 1e-3 * a, -c.C + 1e-3 * b, -c.C + 1e-3 * d, 0.0};
          beta[3] = -(beta[0] + beta[1] + beta[2]);
          if (std::abs(beta[3]) > c.C) continue;
          grid_best = std::max(grid_best, objective(beta));
        }
      }
    }
    const double got = r.report.objective_trace.back();
    std::vector<double> beta(4, 0.0);
    for (std::size_t k = 0; k < r.model.support_count(); ++k) {
      for (int i = 0; i < 4; ++i) {
        if (r.model.support_vector(k)[0] == xs[i]) beta[i] = r.model.coefficients[k];
      }
    }
    CHECK(got == doctest::Approx(objective(beta.data())).epsilon(1e-12));
    CHECK(svr_dual_objective(s, beta, c) == doctest::Approx(got).epsilon(1e-12));
    CHECK(std::abs(got - grid_best) <= 1e-3);
    CHECK(got >= grid_best - 1e-12);
  }

  TEST_CASE("dual objective never decreases and coefficients stay boxed") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 30; ++trial) {
      const Samples s = random_samples(20, 3, rng);
      SvrConfig c;
      c.C = trial % 2 ? 0.5 : 5.0;
      c.gamma = 1.0 + trial % 5;
      c.epsilon_tube = 0.005;
      c.tol = 1e-6;
      c.max_passes = 3 + trial;
      const SvrResult r = svr_train(s, c);
      const auto& trace = r.report.objective_trace;
      REQUIRE_FALSE(trace.empty());
      CHECK(trace.front() >= 0.0);
      for (std::size_t k = 1; k < trace.size(); ++k) CHECK(trace[k] >= trace[k - 1] - 1e-12);
      double sum = 0.0;
      for (double b : r.model.coefficients) {
        CHECK(std::abs(b) <= c.C);
        CHECK(b != 0.0);
        sum += b;
      }
      CHECK(std::abs(sum) <= 1e-12);
      CHECK(r.report.iterations <= c.max_passes * s.size());
      if (!r.report.converged) CHECK(r.report.final_violation > c.tol);
    }
  }

  TEST_CASE("lone support vector") {
    SvrModel m;
    m.dim = 2;
    m.gamma = 4.0;
    m.bias = 0.1;
    m.support_vectors = {0.2, 0.6};
    m.coefficients = {0.35};
    const double x[2] = {0.2, 0.6};
    CHECK(svr_predict(m, x) == doctest::Approx(0.45).epsilon(1e-15));
    m.coefficients.clear();
    m.support_vectors.clear();
    CHECK(svr_predict(m, x) == 0.1);
  }

  TEST_CASE("SVR prediction is continuous") {
    std::mt19937_64 rng(7);
    const Samples s = random_samples(60, 4, rng);
    const SvrResult r = svr_train(s, SvrConfig{});
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      double x[4] = {u(rng), u(rng), u(rng), u(rng)};
      const double a = svr_predict(r.model, x);
      x[i % 4] += 1e-9;
      CHECK(std::abs(svr_predict(r.model, x) - a) < 1e-6);
    }
  }

  TEST_CASE("SVR is deterministic and fits a smooth target") {
    std::mt19937_64 rng(8);
    const Samples s = random_samples(150, 3, rng);
    SvrConfig c;
    c.C = 10.0;
    c.gamma = 2.0;
    const SvrResult a = svr_train(s, c);
    const SvrResult b = svr_train(s, c);
    CHECK(a.model.coefficients == b.model.coefficients);
    CHECK(a.model.bias == b.model.bias);
    CHECK(a.report.converged);
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      worst = std::max(worst, std::abs(svr_predict(a.model, s.row(i)) - s.y[i]));
    }
    CHECK(worst <= c.epsilon_tube + 0.02);
  }
}

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

// Comparison regressors: a bagged CART random forest and an epsilon-SVR with an
// RBF kernel. Both consume normalised Samples of any dimension.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "phosforge/samples.hpp"

namespace phosforge::baselines {

// --- random forest ----------------------------------------------------------

struct ForestConfig {
  std::size_t n_trees = 100;
  std::optional<std::size_t> max_depth;
  std::size_t min_samples_leaf = 1;
  std::size_t min_samples_split = 2;
  double feature_fraction = 1.0;  // of the input dimension, per split
  bool bootstrap = true;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Internal nodes send x[feature] <= threshold left, else right.
struct TreeNode {
  static constexpr std::uint32_t kLeaf = UINT32_MAX;

  std::uint32_t feature = kLeaf;
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double value = 0.0;  // leaf prediction: mean of the leaf's targets

  bool is_leaf() const { return feature == kLeaf; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> x) const;
  std::size_t depth() const;
};

struct Forest {
  std::size_t dim = 0;
  std::vector<Tree> trees;
};

/// Split candidates closer than this to the best found so far count as ties;
/// ties go to the lowest feature index, then the lowest threshold.
double split_tie_tolerance(double node_sse);

/// Grows one tree from the rows listed in `rows` (duplicates allowed) by
/// greedy squared-error CART. `rng_seed` drives per-split feature sampling and
/// is unused when feature_fraction selects every feature.
Tree grow_tree(const Samples& data, std::span<const std::size_t> rows, const ForestConfig& config,
               std::uint64_t rng_seed);

/// Tree t is grown with seed config.seed + t.
Forest rf_train(const Samples& train_set, const ForestConfig& config);

/// Mean of the tree predictions.
double rf_predict(const Forest& forest, std::span<const double> x);

// --- epsilon-SVR ------------------------------------------------------------

struct SvrConfig {
  double C = 1.0;
  double gamma = 1.0 / 12.0;
  double epsilon_tube = 0.01;
  double tol = 1e-3;
  /// Iteration cap, in units of n pair updates.
  std::size_t max_passes = 1000;

  void validate() const;
};

struct SvrModel {
  std::size_t dim = 0;
  std::vector<double> support_vectors;  // row-major, support_count() x dim
  std::vector<double> coefficients;     // alpha - alpha*, within [-C, C]
  double bias = 0.0;
  double gamma = 0.0;

  std::size_t support_count() const { return coefficients.size(); }
  std::span<const double> support_vector(std::size_t i) const {
    return {support_vectors.data() + i * dim, dim};
  }
};

struct SvrTrainReport {
  bool converged = false;
  double final_violation = 0.0;       // max KKT violation at exit
  std::size_t iterations = 0;         // pair updates
  std::vector<double> objective_trace;  // dual objective after each pass of n updates
};

struct SvrResult {
  SvrModel model;
  SvrTrainReport report;
};

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// Maximises the epsilon-SVR dual
///
///   sum_i y_i beta_i - eps sum_i |beta_i| - 1/2 sum_ij beta_i beta_j K_ij
///   s.t. sum_i beta_i = 0, -C <= beta_i <= C
///
/// by exact two-variable updates on the maximal violating pair.
/// Non-convergence within max_passes is reported, not thrown.
SvrResult svr_train(const Samples& train_set, const SvrConfig& config);

/// The dual objective above for arbitrary beta; oracle for tests.
double svr_dual_objective(const Samples& data, std::span<const double> beta,
                          const SvrConfig& config);

/// sum_i c_i k(sv_i, x) + b
double svr_predict(const SvrModel& model, std::span<const double> x);

}  // namespace phosforge::baselines

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
#include <numeric>
#include <random>

#include "phosforge/baselines.hpp"
#include "phosforge/error.hpp"

namespace phosforge::baselines {
namespace {

struct SplitChoice {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double sse = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Samples& data, const ForestConfig& config, std::uint64_t seed)
      : data_(data), config_(config), rng_(seed) {
    const double want = std::ceil(config.feature_fraction * static_cast<double>(data.dim));
    n_candidates_ = std::clamp<std::size_t>(static_cast<std::size_t>(want), 1, data.dim);
    features_.resize(data.dim);
    std::iota(features_.begin(), features_.end(), std::size_t{0});
  }

  Tree build(std::vector<std::size_t> rows) {
    tree_.nodes.clear();
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  std::uint32_t grow(std::vector<std::size_t> rows, std::size_t depth) {
    const auto id = static_cast<std::uint32_t>(tree_.nodes.size());
    tree_.nodes.emplace_back();

    double sum = 0.0;
    double lo = data_.y[rows.front()];
    double hi = lo;
    for (std::size_t r : rows) {
      sum += data_.y[r];
      lo = std::min(lo, data_.y[r]);
      hi = std::max(hi, data_.y[r]);
    }
    tree_.nodes[id].value = sum / static_cast<double>(rows.size());

    const bool depth_ok = !config_.max_depth || depth < *config_.max_depth;
    if (!depth_ok || rows.size() < config_.min_samples_split || lo == hi) return id;

    const SplitChoice best = find_split(rows, tree_.nodes[id].value);
    if (!best.found) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t r : rows) {
      (data_.row(r)[best.feature] <= best.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    tree_.nodes[id].feature = static_cast<std::uint32_t>(best.feature);
    tree_.nodes[id].threshold = best.threshold;
    const std::uint32_t l = grow(std::move(left), depth + 1);
    const std::uint32_t r = grow(std::move(right), depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  SplitChoice find_split(const std::vector<std::size_t>& rows, double mean) {
    // Partial Fisher-Yates draws the candidate features; they are then
    // visited in ascending order so ties resolve to the lowest index.
    if (n_candidates_ < data_.dim) {
      for (std::size_t k = 0; k < n_candidates_; ++k) {
        std::uniform_int_distribution<std::size_t> pick(k, data_.dim - 1);
        std::swap(features_[k], features_[pick(rng_)]);
      }
    }
    std::vector<std::size_t> candidates(features_.begin(), features_.begin() + n_candidates_);
    std::sort(candidates.begin(), candidates.end());

    const std::size_t n = rows.size();
    double node_sse = 0.0;
    for (std::size_t r : rows) {
      const double d = data_.y[r] - mean;
      node_sse += d * d;
    }
    const double tol = split_tie_tolerance(node_sse);

    SplitChoice best;
    std::vector<std::pair<double, double>> col(n);  // (feature value, centred target)
    for (std::size_t f : candidates) {
      for (std::size_t k = 0; k < n; ++k) {
        col[k] = {data_.row(rows[k])[f], data_.y[rows[k]] - mean};
      }
      std::sort(col.begin(), col.end());
      double total = 0.0;
      double total_sq = 0.0;
      for (const auto& [v, y] : col) {
        total += y;
        total_sq += y * y;
      }
      double left_sum = 0.0;
      double left_sq = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        left_sum += col[k].second;
        left_sq += col[k].second * col[k].second;
        if (col[k].first == col[k + 1].first) continue;
        const std::size_t nl = k + 1;
        const std::size_t nr = n - nl;
        if (nl < config_.min_samples_leaf || nr < config_.min_samples_leaf) continue;
        const double right_sum = total - left_sum;
        const double right_sq = total_sq - left_sq;
        const double sse = (left_sq - left_sum * left_sum / static_cast<double>(nl)) +
                           (right_sq - right_sum * right_sum / static_cast<double>(nr));
        if (!best.found || sse < best.sse - tol) {
          best = {true, f, 0.5 * (col[k].first + col[k + 1].first), sse};
        }
      }
    }
    return best;
  }

  const Samples& data_;
  const ForestConfig& config_;
  std::mt19937_64 rng_;
  std::size_t n_candidates_ = 0;
  std::vector<std::size_t> features_;
  Tree tree_;
};

}  // namespace

void ForestConfig::validate() const {
  if (n_trees == 0) throw DataError("forest needs at least one tree");
  if (min_samples_leaf == 0) throw DataError("min_samples_leaf must be >= 1");
  if (min_samples_split < 2) throw DataError("min_samples_split must be >= 2");
  if (!(feature_fraction > 0.0 && feature_fraction <= 1.0)) {
    throw DataError("feature_fraction must lie in (0, 1]");
  }
}

double split_tie_tolerance(double node_sse) { return 1e-12 * std::max(1.0, node_sse); }

double Tree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    i = x[nodes[i].feature] <= nodes[i].threshold ? nodes[i].left : nodes[i].right;
  }
  return nodes[i].value;
}

std::size_t Tree::depth() const {
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  std::size_t deepest = 0;
  while (!stack.empty()) {
    const auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes[i].is_leaf()) {
      stack.push_back({nodes[i].left, d + 1});
      stack.push_back({nodes[i].right, d + 1});
    }
  }
  return deepest;
}

Tree grow_tree(const Samples& data, std::span<const std::size_t> rows, const ForestConfig& config,
               std::uint64_t rng_seed) {
  if (rows.empty()) throw DataError("cannot grow a tree from zero rows");
  TreeBuilder builder(data, config, rng_seed);
  return builder.build(std::vector<std::size_t>(rows.begin(), rows.end()));
}

Forest rf_train(const Samples& train_set, const ForestConfig& config) {
  config.validate();
  if (train_set.empty()) throw DataError("random forest training set is empty");
  const std::size_t n = train_set.size();
  Forest forest;
  forest.dim = train_set.dim;
  forest.trees.reserve(config.n_trees);
  std::vector<std::size_t> rows(n);
  for (std::size_t t = 0; t < config.n_trees; ++t) {
    const std::uint64_t seed = config.seed + t;
    std::mt19937_64 rng(seed);
    if (config.bootstrap) {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (auto& r : rows) r = pick(rng);
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    // The split-sampling stream is derived from the bootstrap stream's state.
    forest.trees.push_back(grow_tree(train_set, rows, config, rng()));
  }
  return forest;
}

double rf_predict(const Forest& forest, std::span<const double> x) {
  if (forest.trees.empty()) throw DataError("forest has no trees");
  double sum = 0.0;
  for (const auto& t : forest.trees) sum += t.predict(x);
  return sum / static_cast<double>(forest.trees.size());
}

}  // namespace phosforge::baselines

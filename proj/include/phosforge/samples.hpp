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

#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace phosforge {

/// Row-major design matrix with one regression target per row. This is what
/// the learners consume; it is dimension-agnostic so small oracle problems
/// (one or two inputs) use the same code path as the 12-feature models.
struct Samples {
  std::size_t dim = 0;
  std::vector<double> x;  // size() * dim
  std::vector<double> y;

  Samples() = default;
  explicit Samples(std::size_t d) : dim(d) {}

  std::size_t size() const { return y.size(); }
  bool empty() const { return y.empty(); }

  std::span<const double> row(std::size_t i) const { return {x.data() + i * dim, dim}; }

  void push(std::span<const double> features, double target) {
    assert(features.size() == dim);
    x.insert(x.end(), features.begin(), features.end());
    y.push_back(target);
  }
};

}  // namespace phosforge

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

// Dense double-precision inner loops used by training and inference.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant. The active variant is picked once per process from the CPU's
// capabilities (overridable through PHOSFORGE_KERNELS=scalar|avx2) and can be
// switched explicitly by tests.
//
// Elementwise kernels (axpy, adam_update) produce bit-identical
// results across variants. Reductions (dot, squared_distance) reassociate the
// sum and agree to within a few ulps of the summed magnitude.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace phosforge::simd {

enum class KernelLevel { kScalar, kAvx2 };

struct AdamCoefficients {
  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
  double bias_correction1;  // 1 - beta1^t
  double bias_correction2;  // 1 - beta2^t
};

struct KernelTable {
  KernelLevel level;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  void (*adam_update)(double* theta, const double* grad, double* m, double* v, std::size_t n,
                      const AdamCoefficients& c);
};

const KernelTable& scalar_kernels();
/// nullptr when the build has no AVX2 variant.
const KernelTable* avx2_kernels();

bool cpu_supports(KernelLevel level);

/// Currently selected table.
const KernelTable& active();
KernelLevel active_level();
/// Throws phosforge::Error when the level is not supported on this CPU.
void set_active_level(KernelLevel level);

std::string_view to_string(KernelLevel level);

// Span conveniences over the active table.

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}

/// RAII switch of the active kernel level, restoring the previous one.
class ScopedKernelLevel {
 public:
  explicit ScopedKernelLevel(KernelLevel level) : previous_(active_level()) {
    set_active_level(level);
  }
  ~ScopedKernelLevel() { set_active_level(previous_); }
  ScopedKernelLevel(const ScopedKernelLevel&) = delete;
  ScopedKernelLevel& operator=(const ScopedKernelLevel&) = delete;

 private:
  KernelLevel previous_;
};

}  // namespace phosforge::simd

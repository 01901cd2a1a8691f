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

#include <atomic>
#include <cstdlib>
#include <string>

#include "phosforge/error.hpp"
#include "phosforge/simd/kernels.hpp"

namespace phosforge::simd {

#if !defined(PHOSFORGE_HAVE_AVX2)
const KernelTable* avx2_kernels() { return nullptr; }
#endif

namespace {

const KernelTable& table_for(KernelLevel level) {
  if (level == KernelLevel::kAvx2 && avx2_kernels() != nullptr) return *avx2_kernels();
  return scalar_kernels();
}

KernelLevel initial_level() {
  if (const char* env = std::getenv("PHOSFORGE_KERNELS")) {
    const std::string want(env);
    if (want == "scalar") return KernelLevel::kScalar;
    if (want == "avx2" && cpu_supports(KernelLevel::kAvx2)) return KernelLevel::kAvx2;
  }
  return cpu_supports(KernelLevel::kAvx2) ? KernelLevel::kAvx2 : KernelLevel::kScalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{&table_for(initial_level())};
  return table;
}

}  // namespace

bool cpu_supports(KernelLevel level) {
  switch (level) {
    case KernelLevel::kScalar:
      return true;
    case KernelLevel::kAvx2:
#if defined(PHOSFORGE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

KernelLevel active_level() { return active().level; }

void set_active_level(KernelLevel level) {
  if (!cpu_supports(level)) {
    throw Error("kernel level '" + std::string(to_string(level)) + "' not supported on this CPU");
  }
  current().store(&table_for(level), std::memory_order_release);
}

std::string_view to_string(KernelLevel level) {
  switch (level) {
    case KernelLevel::kScalar:
      return "scalar";
    case KernelLevel::kAvx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace phosforge::simd

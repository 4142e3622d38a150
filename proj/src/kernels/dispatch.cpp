// Copyright 2026 The cycboost Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <string_view>

#include "cycboost/kernels.hpp"

namespace cycboost::kernels {

#if defined(CYCBOOST_WITH_AVX2)
const KernelTable& Avx2KernelTable();  // avx2.cpp
#endif

const KernelTable* Avx2Kernels() {
#if defined(CYCBOOST_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported = __builtin_cpu_supports("avx2");
  if (supported) return &Avx2KernelTable();
#endif
  return nullptr;
}

const KernelTable& Active() {
  static const KernelTable& active = []() -> const KernelTable& {
    const char* force = std::getenv("CYCBOOST_FORCE_SCALAR");
    if (force != nullptr && std::string_view(force) == "1") {
      return ScalarKernels();
    }
    if (const KernelTable* avx2 = Avx2Kernels()) return *avx2;
    return ScalarKernels();
  }();
  return active;
}

}  // namespace cycboost::kernels

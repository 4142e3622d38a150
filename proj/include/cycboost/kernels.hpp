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

// Data-parallel inner loops of training and prediction.
//
// Every kernel has a scalar reference implementation; an AVX2 variant is
// selected at runtime when the CPU supports it. Elementwise kernels produce
// bit-identical results across variants. Reductions accumulate in four or
// more lanes, so their results agree with the scalar reference only up to
// floating-point reassociation.
//
// Setting the environment variable CYCBOOST_FORCE_SCALAR=1 before the first
// kernel call pins the scalar table.

#ifndef CYCBOOST_KERNELS_HPP_
#define CYCBOOST_KERNELS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace cycboost {

using BinIndex = std::uint32_t;

namespace kernels {

struct KernelTable {
  std::string_view name;

  // values[i] *= table[bins[i]]
  void (*gather_multiply)(std::span<double> values,
                          std::span<const BinIndex> bins,
                          std::span<const double> table);
  // values[i] += table[bins[i]]
  void (*gather_add)(std::span<double> values, std::span<const BinIndex> bins,
                     std::span<const double> table);
  // sum_i w[i] * |y[i] - yhat[i]|; an empty weight span means unit weights.
  double (*weighted_abs_error)(std::span<const double> y,
                               std::span<const double> yhat,
                               std::span<const double> w);
  // sum_i w[i] * (y[i] - yhat[i])^2
  double (*weighted_sq_error)(std::span<const double> y,
                              std::span<const double> yhat,
                              std::span<const double> w);
  // sum_i 2|yhat - y| / (|y| + |yhat|), terms with y = yhat = 0 count 0.
  double (*smape_sum)(std::span<const double> y, std::span<const double> yhat);
  // p[i] = odds[i] / (1 + odds[i])
  void (*odds_to_probability)(std::span<const double> odds,
                              std::span<double> probability);
};

const KernelTable& ScalarKernels();

// Null when the build or the CPU lacks AVX2.
const KernelTable* Avx2Kernels();

// The table used by the library.
const KernelTable& Active();

}  // namespace kernels
}  // namespace cycboost

#endif  // CYCBOOST_KERNELS_HPP_

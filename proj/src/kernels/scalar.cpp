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

#include <cmath>

#include "cycboost/kernels.hpp"

namespace cycboost::kernels {
namespace {

void GatherMultiplyRef(std::span<double> values, std::span<const BinIndex> bins,
                       std::span<const double> table) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] *= table[bins[i]];
  }
}

void GatherAddRef(std::span<double> values, std::span<const BinIndex> bins,
                  std::span<const double> table) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] += table[bins[i]];
  }
}

double WeightedAbsErrorRef(std::span<const double> y,
                           std::span<const double> yhat,
                           std::span<const double> w) {
  double sum = 0.0;
  if (w.empty()) {
    for (std::size_t i = 0; i < y.size(); ++i) sum += std::fabs(y[i] - yhat[i]);
  } else {
    for (std::size_t i = 0; i < y.size(); ++i) {
      sum += w[i] * std::fabs(y[i] - yhat[i]);
    }
  }
  return sum;
}

double WeightedSqErrorRef(std::span<const double> y,
                          std::span<const double> yhat,
                          std::span<const double> w) {
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - yhat[i];
    sum += (w.empty() ? 1.0 : w[i]) * (d * d);
  }
  return sum;
}

double SmapeSumRef(std::span<const double> y, std::span<const double> yhat) {
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double denom = std::fabs(y[i]) + std::fabs(yhat[i]);
    if (denom > 0.0) sum += 2.0 * std::fabs(yhat[i] - y[i]) / denom;
  }
  return sum;
}

void OddsToProbabilityRef(std::span<const double> odds,
                          std::span<double> probability) {
  for (std::size_t i = 0; i < odds.size(); ++i) {
    probability[i] = odds[i] / (1.0 + odds[i]);
  }
}

}  // namespace

const KernelTable& ScalarKernels() {
  static const KernelTable table{
      "scalar",          GatherMultiplyRef, GatherAddRef,       WeightedAbsErrorRef,
      WeightedSqErrorRef, SmapeSumRef,       OddsToProbabilityRef,
  };
  return table;
}

}  // namespace cycboost::kernels

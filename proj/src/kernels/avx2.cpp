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

// Compiled with -mavx2 only; never call into this file without checking
// cpu support first (see dispatch.cpp).

#include <immintrin.h>

#include <cmath>

#include "cycboost/kernels.hpp"

namespace cycboost::kernels {
namespace {

inline __m256d Abs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

inline __m128i LoadIndices(const BinIndex* bins) {
  return _mm_loadu_si128(reinterpret_cast<const __m128i*>(bins));
}

void GatherMultiplyAvx2(std::span<double> values, std::span<const BinIndex> bins,
                        std::span<const double> table) {
  const std::size_t n = values.size();
  double* v = values.data();
  const BinIndex* b = bins.data();
  const double* t = table.data();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d f0 = _mm256_i32gather_pd(t, LoadIndices(b + i), 8);
    const __m256d f1 = _mm256_i32gather_pd(t, LoadIndices(b + i + 4), 8);
    _mm256_storeu_pd(v + i, _mm256_mul_pd(_mm256_loadu_pd(v + i), f0));
    _mm256_storeu_pd(v + i + 4, _mm256_mul_pd(_mm256_loadu_pd(v + i + 4), f1));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d f = _mm256_i32gather_pd(t, LoadIndices(b + i), 8);
    _mm256_storeu_pd(v + i, _mm256_mul_pd(_mm256_loadu_pd(v + i), f));
  }
  for (; i < n; ++i) v[i] *= t[b[i]];
}

void GatherAddAvx2(std::span<double> values, std::span<const BinIndex> bins,
                   std::span<const double> table) {
  const std::size_t n = values.size();
  double* v = values.data();
  const BinIndex* b = bins.data();
  const double* t = table.data();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d f0 = _mm256_i32gather_pd(t, LoadIndices(b + i), 8);
    const __m256d f1 = _mm256_i32gather_pd(t, LoadIndices(b + i + 4), 8);
    _mm256_storeu_pd(v + i, _mm256_add_pd(_mm256_loadu_pd(v + i), f0));
    _mm256_storeu_pd(v + i + 4, _mm256_add_pd(_mm256_loadu_pd(v + i + 4), f1));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d f = _mm256_i32gather_pd(t, LoadIndices(b + i), 8);
    _mm256_storeu_pd(v + i, _mm256_add_pd(_mm256_loadu_pd(v + i), f));
  }
  for (; i < n; ++i) v[i] += t[b[i]];
}

double WeightedAbsErrorAvx2(std::span<const double> y,
                            std::span<const double> yhat,
                            std::span<const double> w) {
  const std::size_t n = y.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  const bool weighted = !w.empty();
  for (; i + 8 <= n; i += 8) {
    __m256d d0 = Abs(_mm256_sub_pd(_mm256_loadu_pd(&y[i]), _mm256_loadu_pd(&yhat[i])));
    __m256d d1 = Abs(_mm256_sub_pd(_mm256_loadu_pd(&y[i + 4]),
                                   _mm256_loadu_pd(&yhat[i + 4])));
    if (weighted) {
      d0 = _mm256_mul_pd(_mm256_loadu_pd(&w[i]), d0);
      d1 = _mm256_mul_pd(_mm256_loadu_pd(&w[i + 4]), d1);
    }
    acc0 = _mm256_add_pd(acc0, d0);
    acc1 = _mm256_add_pd(acc1, d1);
  }
  double sum = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    sum += (weighted ? w[i] : 1.0) * std::fabs(y[i] - yhat[i]);
  }
  return sum;
}

double WeightedSqErrorAvx2(std::span<const double> y,
                           std::span<const double> yhat,
                           std::span<const double> w) {
  const std::size_t n = y.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  const bool weighted = !w.empty();
  for (; i + 8 <= n; i += 8) {
    const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(&y[i]), _mm256_loadu_pd(&yhat[i]));
    const __m256d d1 =
        _mm256_sub_pd(_mm256_loadu_pd(&y[i + 4]), _mm256_loadu_pd(&yhat[i + 4]));
    __m256d s0 = _mm256_mul_pd(d0, d0);
    __m256d s1 = _mm256_mul_pd(d1, d1);
    if (weighted) {
      s0 = _mm256_mul_pd(_mm256_loadu_pd(&w[i]), s0);
      s1 = _mm256_mul_pd(_mm256_loadu_pd(&w[i + 4]), s1);
    }
    acc0 = _mm256_add_pd(acc0, s0);
    acc1 = _mm256_add_pd(acc1, s1);
  }
  double sum = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    const double d = y[i] - yhat[i];
    sum += (weighted ? w[i] : 1.0) * (d * d);
  }
  return sum;
}

double SmapeSumAvx2(std::span<const double> y, std::span<const double> yhat) {
  const std::size_t n = y.size();
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(&y[i]);
    const __m256d f = _mm256_loadu_pd(&yhat[i]);
    const __m256d denom = _mm256_add_pd(Abs(a), Abs(f));
    const __m256d positive = _mm256_cmp_pd(denom, zero, _CMP_GT_OQ);
    // Divide by 1 in the 0/0 lanes, then mask those lanes out.
    const __m256d safe = _mm256_blendv_pd(one, denom, positive);
    const __m256d term =
        _mm256_div_pd(_mm256_mul_pd(two, Abs(_mm256_sub_pd(f, a))), safe);
    acc = _mm256_add_pd(acc, _mm256_and_pd(term, positive));
  }
  double sum = HorizontalSum(acc);
  for (; i < n; ++i) {
    const double denom = std::fabs(y[i]) + std::fabs(yhat[i]);
    if (denom > 0.0) sum += 2.0 * std::fabs(yhat[i] - y[i]) / denom;
  }
  return sum;
}

void OddsToProbabilityAvx2(std::span<const double> odds,
                           std::span<double> probability) {
  const std::size_t n = odds.size();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d o = _mm256_loadu_pd(&odds[i]);
    _mm256_storeu_pd(&probability[i], _mm256_div_pd(o, _mm256_add_pd(one, o)));
  }
  for (; i < n; ++i) probability[i] = odds[i] / (1.0 + odds[i]);
}

}  // namespace

const KernelTable& Avx2KernelTable() {
  static const KernelTable table{
      "avx2",
      GatherMultiplyAvx2,
      GatherAddAvx2,
      WeightedAbsErrorAvx2,
      WeightedSqErrorAvx2,
      SmapeSumAvx2,
      OddsToProbabilityAvx2,
  };
  return table;
}

}  // namespace cycboost::kernels

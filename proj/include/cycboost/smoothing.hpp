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

// Regularization of factor tables across bins, in link space (ln f for the
// multiplicative and classification modes, the raw summand for additive).
// Zero is neutral in link space and every smoother maps an all-zero input to
// an all-zero output. The reserved bin is never passed in.

#ifndef CYCBOOST_SMOOTHING_HPP_
#define CYCBOOST_SMOOTHING_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace cycboost {

enum class ContinuousSmoother { kOrthogonalPolynomial, kNone };
enum class CategoricalSmoother { kShrinkToNeutral, kNone };
enum class TwoDimSmoother { kGroupBy, kTruncatedSvd };

std::string_view ToString(ContinuousSmoother method);
std::string_view ToString(CategoricalSmoother method);
std::string_view ToString(TwoDimSmoother method);
ContinuousSmoother ParseContinuousSmoother(std::string_view text);
CategoricalSmoother ParseCategoricalSmoother(std::string_view text);
TwoDimSmoother ParseTwoDimSmoother(std::string_view text);

struct SmoothingInput {
  std::vector<double> bin_centers;  // continuous features only
  std::vector<double> link_values;
  std::vector<double> sigmas;  // > 0
};

struct SmootherConfig {
  ContinuousSmoother continuous_method = ContinuousSmoother::kOrthogonalPolynomial;
  int max_degree = 3;
  CategoricalSmoother categorical_method = CategoricalSmoother::kShrinkToNeutral;
  // Unset: group-by when one axis is categorical, truncated SVD when both
  // axes are continuous.
  std::optional<TwoDimSmoother> two_dim_method;
  int svd_rank = 2;
  // Replaces the built-in smoother for a feature when set (e.g. to force a
  // parametric shape). Not persisted with the model.
  std::function<std::vector<double>(const SmoothingInput&)> custom;

  static SmootherConfig Disabled();
};

struct PolynomialFit {
  int degree = 0;
  double chi2 = 0.0;
  std::vector<double> fitted;
};

// Weighted least squares (weights 1/sigma^2) of an orthogonal polynomial
// basis of exactly the given degree, built by the three-term recurrence on
// centers mapped to [-1, 1].
PolynomialFit FitOrthogonalPolynomial(const SmoothingInput& input, int degree);

// Picks the smallest degree d <= max_degree with chi2 / (n - d - 1) <= 1, or
// max_degree when none qualifies. Fewer bins than max_degree + 1 fall back to
// the weighted constant fit.
std::vector<double> SmoothContinuous(const SmoothingInput& input,
                                     const SmootherConfig& config);

// Empirical-Bayes shrinkage toward 0: v * tau^2 / (tau^2 + sigma^2) with
// tau^2 = max(var(v) - mean(sigma^2), 1e-12). A single bin returns 0.
std::vector<double> ShrinkCategorical(const SmoothingInput& input);

// Row-major grid of link values over a 2D composed feature.
struct LinkGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<double> sigmas;

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

enum class GridAxis { kRows, kColumns };

// Applies SmoothContinuous to every slice along the categorical axis.
// continuous_centers has one entry per bin of the other axis.
LinkGrid SmoothTwoDimGroupBy(const LinkGrid& grid, GridAxis categorical_axis,
                             const std::vector<double>& continuous_centers,
                             const SmootherConfig& config);

// Rank-r truncation U_r S_r V_r^T of the grid; r is clamped to min(rows, cols).
LinkGrid SmoothTwoDimSvd(const LinkGrid& grid, int rank);

}  // namespace cycboost

#endif  // CYCBOOST_SMOOTHING_HPP_

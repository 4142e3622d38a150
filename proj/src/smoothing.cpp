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

#include "cycboost/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "cycboost/error.hpp"

namespace cycboost {

std::string_view ToString(ContinuousSmoother method) {
  return method == ContinuousSmoother::kNone ? "none" : "orthogonal_polynomial";
}
std::string_view ToString(CategoricalSmoother method) {
  return method == CategoricalSmoother::kNone ? "none" : "shrink_to_neutral";
}
std::string_view ToString(TwoDimSmoother method) {
  return method == TwoDimSmoother::kGroupBy ? "groupby" : "truncated_svd";
}

ContinuousSmoother ParseContinuousSmoother(std::string_view text) {
  if (text == "none") return ContinuousSmoother::kNone;
  if (text == "orthogonal_polynomial") return ContinuousSmoother::kOrthogonalPolynomial;
  throw SchemaError("unknown continuous smoother '" + std::string(text) + "'");
}
CategoricalSmoother ParseCategoricalSmoother(std::string_view text) {
  if (text == "none") return CategoricalSmoother::kNone;
  if (text == "shrink_to_neutral") return CategoricalSmoother::kShrinkToNeutral;
  throw SchemaError("unknown categorical smoother '" + std::string(text) + "'");
}
TwoDimSmoother ParseTwoDimSmoother(std::string_view text) {
  if (text == "groupby") return TwoDimSmoother::kGroupBy;
  if (text == "truncated_svd") return TwoDimSmoother::kTruncatedSvd;
  throw SchemaError("unknown two-dimensional smoother '" + std::string(text) + "'");
}

SmootherConfig SmootherConfig::Disabled() {
  SmootherConfig config;
  config.continuous_method = ContinuousSmoother::kNone;
  config.categorical_method = CategoricalSmoother::kNone;
  return config;
}

namespace {

void CheckInput(const SmoothingInput& input, bool need_centers) {
  const std::size_t n = input.link_values.size();
  if (input.sigmas.size() != n || (need_centers && input.bin_centers.size() != n)) {
    throw ShapeError("smoothing input columns differ in length");
  }
  for (const double s : input.sigmas) {
    if (!(s > 0)) throw DomainError("smoothing sigmas must be > 0");
  }
}

std::vector<double> WeightedConstant(const SmoothingInput& input) {
  double sw = 0.0;
  double swv = 0.0;
  for (std::size_t i = 0; i < input.link_values.size(); ++i) {
    const double w = 1.0 / (input.sigmas[i] * input.sigmas[i]);
    sw += w;
    swv += w * input.link_values[i];
  }
  return std::vector<double>(input.link_values.size(), sw > 0 ? swv / sw : 0.0);
}

// Incremental orthogonal-polynomial fits of degree 0..max_degree.
class OrthogonalBasis {
 public:
  explicit OrthogonalBasis(const SmoothingInput& input)
      : n_(input.link_values.size()), values_(input.link_values) {
    weights_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      weights_[i] = 1.0 / (input.sigmas[i] * input.sigmas[i]);
    }
    const auto [lo, hi] =
        std::minmax_element(input.bin_centers.begin(), input.bin_centers.end());
    t_.resize(n_);
    const double span = *hi - *lo;
    for (std::size_t i = 0; i < n_; ++i) {
      t_[i] = span > 0 ? (2.0 * input.bin_centers[i] - (*lo + *hi)) / span : 0.0;
    }
    fitted_.assign(n_, 0.0);
    current_.assign(n_, 1.0);
    previous_.assign(n_, 0.0);
    current_norm_ = Dot(current_, current_);
  }

  // Adds the next basis polynomial to the fit. Returns false once the basis
  // degenerates (fewer distinct centers than coefficients).
  bool Extend() {
    if (degree_ >= 0) {
      const double a = DotT(current_, current_) / current_norm_;
      const double b = degree_ > 0 ? current_norm_ / previous_norm_ : 0.0;
      std::vector<double> next(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        next[i] = (t_[i] - a) * current_[i] - b * previous_[i];
      }
      const double next_norm = Dot(next, next);
      if (!(next_norm > 1e-12 * current_norm_)) return false;
      previous_ = std::move(current_);
      previous_norm_ = current_norm_;
      current_ = std::move(next);
      current_norm_ = next_norm;
    }
    ++degree_;
    const double coefficient = Dot(values_, current_) / current_norm_;
    for (std::size_t i = 0; i < n_; ++i) fitted_[i] += coefficient * current_[i];
    return true;
  }

  int degree() const { return degree_; }
  const std::vector<double>& fitted() const { return fitted_; }

  double Chi2() const {
    double chi2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double r = values_[i] - fitted_[i];
      chi2 += weights_[i] * r * r;
    }
    return chi2;
  }

 private:
  double Dot(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += weights_[i] * a[i] * b[i];
    return s;
  }
  double DotT(const std::vector<double>& a, const std::vector<double>& b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += weights_[i] * t_[i] * a[i] * b[i];
    return s;
  }

  std::size_t n_;
  std::vector<double> values_;
  std::vector<double> weights_;
  std::vector<double> t_;
  std::vector<double> fitted_;
  std::vector<double> current_;
  std::vector<double> previous_;
  double current_norm_ = 0.0;
  double previous_norm_ = 0.0;
  int degree_ = -1;
};

}  // namespace

PolynomialFit FitOrthogonalPolynomial(const SmoothingInput& input, int degree) {
  CheckInput(input, true);
  if (input.link_values.empty()) return {};
  OrthogonalBasis basis(input);
  while (basis.degree() < degree && basis.Extend()) {
  }
  return {basis.degree(), basis.Chi2(), basis.fitted()};
}

std::vector<double> SmoothContinuous(const SmoothingInput& input,
                                     const SmootherConfig& config) {
  CheckInput(input, true);
  if (config.custom) return config.custom(input);
  const std::size_t n = input.link_values.size();
  if (config.continuous_method == ContinuousSmoother::kNone || n == 0) {
    return input.link_values;
  }
  const int max_degree = std::max(config.max_degree, 0);
  if (n < static_cast<std::size_t>(max_degree) + 1) return WeightedConstant(input);

  OrthogonalBasis basis(input);
  while (basis.degree() < max_degree && basis.Extend()) {
    const int dof = static_cast<int>(n) - basis.degree() - 1;
    if (dof > 0 && basis.Chi2() <= dof) return basis.fitted();
  }
  return basis.fitted();
}

std::vector<double> ShrinkCategorical(const SmoothingInput& input) {
  CheckInput(input, false);
  if (input.link_values.size() == 1) return {0.0};
  const std::size_t n = input.link_values.size();
  if (n == 0) return {};
  double mean = 0.0;
  double mean_sigma2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean += input.link_values[i];
    mean_sigma2 += input.sigmas[i] * input.sigmas[i];
  }
  mean /= static_cast<double>(n);
  mean_sigma2 /= static_cast<double>(n);
  double variance = 0.0;
  for (const double v : input.link_values) variance += (v - mean) * (v - mean);
  variance /= static_cast<double>(n);
  const double tau2 = std::max(variance - mean_sigma2, 1e-12);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s2 = input.sigmas[i] * input.sigmas[i];
    out[i] = input.link_values[i] * (tau2 / (tau2 + s2));
  }
  return out;
}

LinkGrid SmoothTwoDimGroupBy(const LinkGrid& grid, GridAxis categorical_axis,
                             const std::vector<double>& continuous_centers,
                             const SmootherConfig& config) {
  if (grid.values.size() != grid.rows * grid.cols || grid.sigmas.size() != grid.values.size()) {
    throw ShapeError("link grid storage does not match its dimensions");
  }
  const bool by_row = categorical_axis == GridAxis::kRows;
  const std::size_t groups = by_row ? grid.rows : grid.cols;
  const std::size_t length = by_row ? grid.cols : grid.rows;
  if (continuous_centers.size() != length) {
    throw ShapeError("continuous centers do not match the grid axis");
  }
  LinkGrid out = grid;
  for (std::size_t g = 0; g < groups; ++g) {
    SmoothingInput slice;
    slice.bin_centers = continuous_centers;
    slice.link_values.resize(length);
    slice.sigmas.resize(length);
    for (std::size_t k = 0; k < length; ++k) {
      const std::size_t idx = by_row ? g * grid.cols + k : k * grid.cols + g;
      slice.link_values[k] = grid.values[idx];
      slice.sigmas[k] = grid.sigmas[idx];
    }
    const std::vector<double> smoothed = SmoothContinuous(slice, config);
    for (std::size_t k = 0; k < length; ++k) {
      const std::size_t idx = by_row ? g * grid.cols + k : k * grid.cols + g;
      out.values[idx] = smoothed[k];
    }
  }
  return out;
}

LinkGrid SmoothTwoDimSvd(const LinkGrid& grid, int rank) {
  if (grid.values.size() != grid.rows * grid.cols) {
    throw ShapeError("link grid storage does not match its dimensions");
  }
  LinkGrid out = grid;
  if (grid.rows == 0 || grid.cols == 0) return out;
  const Eigen::Index r = std::clamp<Eigen::Index>(
      rank, 0, static_cast<Eigen::Index>(std::min(grid.rows, grid.cols)));
  Eigen::MatrixXd m(grid.rows, grid.cols);
  for (std::size_t i = 0; i < grid.rows; ++i) {
    for (std::size_t j = 0; j < grid.cols; ++j) m(i, j) = grid.at(i, j);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::MatrixXd low_rank = svd.matrixU().leftCols(r) *
                                   svd.singularValues().head(r).asDiagonal() *
                                   svd.matrixV().leftCols(r).transpose();
  for (std::size_t i = 0; i < grid.rows; ++i) {
    for (std::size_t j = 0; j < grid.cols; ++j) out.at(i, j) = low_rank(i, j);
  }
  return out;
}

}  // namespace cycboost

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

// Per-bin sufficient statistics and conjugate-posterior estimates.
//
//   multiplicative  Gamma posterior   g = alpha / beta
//                   alpha = a0 + sum w*y,  beta = b0 + sum w*yhat
//   classification  Beta posterior over the (weighted) success fraction,
//                   turned into an odds-space multiplier
//   additive        Gaussian: weighted mean residual
//
// All aggregations are folds over rows; partial results over disjoint row
// sets combine with Merge() into the result over their union.

#ifndef CYCBOOST_CONJUGATE_HPP_
#define CYCBOOST_CONJUGATE_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "cycboost/kernels.hpp"

namespace cycboost {

enum class Estimator { kMean, kMedian };

struct PriorConfig {
  double gamma_alpha_prior = 2.0;
  // Rounded; the exact Gamma(2) median is 1.678346990...
  double gamma_beta_prior = 1.67834;
  double beta_alpha_prior = 1.001;
  double beta_beta_prior = 1.001;
  Estimator estimator = Estimator::kMean;

  // Throws DomainError unless every prior is > 0.
  void Validate() const;
};

struct BinPosterior {
  double alpha = 0.0;
  double beta = 0.0;
  double weight_sum = 0.0;
  double sq_weight_sum = 0.0;  // sum of squared effective row weights
  std::size_t count = 0;
};

struct GaussianBinStats {
  double weighted_residual_sum = 0.0;  // sum w*(y - yhat)
  double weight_sum = 0.0;             // sum w
  std::size_t count = 0;

  // Second-order terms for the uncertainty, all with |w| weights.
  double abs_weight_sum = 0.0;       // sum |w|
  double sq_weight_sum = 0.0;        // sum w^2
  double abs_residual_sum = 0.0;     // sum |w|*(y - yhat)
  double abs_sq_residual_sum = 0.0;  // sum |w|*(y - yhat)^2

  // Per-sign group sums used by the signed-weight contrast.
  double pos_weight_sum = 0.0;   // sum over w>0 of w
  double neg_weight_sum = 0.0;   // sum over w<0 of |w|
  double pos_target_sum = 0.0;   // sum over w>0 of w*y
  double neg_target_sum = 0.0;   // sum over w<0 of |w|*y
  double pos_target_sq_sum = 0.0;  // sum over w>0 of w*y^2
  double neg_target_sq_sum = 0.0;  // sum over w<0 of |w|*y^2
  double abs_pred_sum = 0.0;     // sum |w|*yhat
};

struct GaussianEstimate {
  double summand = 0.0;
  double sigma = 0.0;
  bool low_statistics = false;
};

// Row inputs of one aggregation pass. An empty weight span means unit
// weights. Bins outside [0, n_bins - 1) (the reserved bin) aggregate nothing.
struct BinnedRows {
  std::span<const double> y;
  std::span<const double> yhat;
  std::span<const double> w;
  std::span<const BinIndex> bins;
  std::size_t n_bins = 0;  // including the reserved bin
};

// Multiplicative mode. Throws ModeError on negative weights and DataError on
// NaN inputs.
std::vector<BinPosterior> AggregateGamma(const BinnedRows& rows,
                                         const PriorConfig& priors);
// Classification mode; rows.yhat holds probabilities in (0, 1). With
// boost_weights each row is additionally weighted by 1 - p (y = 1) or p
// (y = 0) and the sums are normalized by the per-bin weight total.
// Throws DataError when y is not 0/1.
std::vector<BinPosterior> AggregateBeta(const BinnedRows& rows,
                                        const PriorConfig& priors,
                                        bool boost_weights);
// Additive mode; signed weights allowed. Throws DataError on NaN.
std::vector<GaussianBinStats> AggregateGaussian(const BinnedRows& rows);

// Un-normalized Beta statistics: alpha/beta hold the weighted success and
// failure mass without prior, so that partial results over row partitions
// merge by addition. FinalizeBeta adds the priors (and normalizes when
// boosting).
std::vector<BinPosterior> AccumulateBeta(const BinnedRows& rows, bool boost_weights);
std::vector<BinPosterior> FinalizeBeta(std::vector<BinPosterior> raw,
                                       const PriorConfig& priors,
                                       bool boost_weights);

// The boosted posterior holds success and failure fractions (total mass 1 on
// top of the priors), which says nothing about how many rows back it. This
// rescales the fractions by the bin's effective size (sum w)^2 / sum w^2.
BinPosterior EffectiveBetaPosterior(const BinPosterior& boosted, const PriorConfig& priors);

// Delta-method standard deviation of ln g for the boosted estimate
// g = alpha / beta with alpha = prior + s, beta = prior + 1 - s: the spread of
// the success fraction s under the effective-size posterior, times
// d ln g / ds = 1/alpha + 1/beta.
double BoostedLogFactorUncertainty(const BinPosterior& boosted, const PriorConfig& priors);

void Merge(BinPosterior& into, const BinPosterior& other, double alpha_prior,
           double beta_prior);
void Merge(GaussianBinStats& into, const GaussianBinStats& other);

// Mean alpha/beta, or the median of Gamma(alpha, rate beta) by bisection on
// the regularized lower incomplete gamma function.
double GammaPointEstimate(const BinPosterior& posterior, Estimator estimator);

// Standard deviation of ln f from moment matching the Gamma posterior to a
// log-normal: sqrt(ln(1 + alpha) - ln(alpha)). Throws DomainError for
// alpha <= 0.
double LogFactorUncertainty(double alpha);

// Odds-space multiplier of a Beta posterior relative to reference_odds:
// (qbar / (1 - qbar)) / reference_odds with qbar = alpha / (alpha + beta).
// The median estimator uses the Beta median of q instead of its mean.
// Throws DomainError unless alpha, beta > 0.
double BetaPointEstimate(const BinPosterior& posterior, double reference_odds,
                         Estimator estimator = Estimator::kMean);

// Delta-method standard deviation of the log-odds of a Beta posterior:
// sqrt(Var(q)) / (qbar * (1 - qbar)).
double LogOddsUncertainty(const BinPosterior& posterior);

// Weighted mean residual sum(w r) / max(sum w, eps_w). A bin whose weight sum
// falls below eps_w is flagged low-statistics and its summand set to 0.
// sigma = residual standard deviation / sqrt(max(n_eff, 1)) where n_eff is
// sum |w| for nonnegative weights and (sum|w|)^2 / sum w^2 otherwise; bins
// with n_eff < 2 use fallback_sigma.
GaussianEstimate GaussianPartialSummand(const GaussianBinStats& stats,
                                        double eps_w, double fallback_sigma);

// Signed-weight contrast for background subtraction: the mean target of the
// positive-weight group minus that of the negative-weight group, minus the
// |w|-weighted mean current prediction. Without negative weights this is
// exactly GaussianPartialSummand. A bin that lacks one of the two groups (mass
// below eps_w) is flagged low-statistics with summand 0. sigma is
// 2 * pooled within-group sd / sqrt(n_eff), which equals the standard error
// of a difference of two balanced group means; it does not depend on yhat,
// so it is invariant under flipping every weight's sign.
GaussianEstimate ContrastPartialSummand(const GaussianBinStats& stats,
                                        double eps_w, double fallback_sigma);

}  // namespace cycboost

#endif  // CYCBOOST_CONJUGATE_HPP_

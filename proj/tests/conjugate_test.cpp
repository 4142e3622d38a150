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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cycboost/conjugate.hpp"
#include "cycboost/error.hpp"

namespace cycboost {
namespace {

// Median by bisection on a closed-form CDF.
template <typename Cdf>
double BisectMedian(Cdf cdf, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Integer-shape Gamma(k, rate 1) CDF: 1 - e^-x sum_{j<k} x^j / j!.
double ErlangCdf(int k, double x) {
  double term = 1.0, sum = 0.0;
  for (int j = 0; j < k; ++j) {
    sum += term;
    term *= x / (j + 1);
  }
  return 1.0 - std::exp(-x) * sum;
}

BinnedRows Rows(const std::vector<double>& y, const std::vector<double>& yhat,
                const std::vector<double>& w, const std::vector<BinIndex>& bins,
                std::size_t n_bins) {
  return BinnedRows{y, yhat, w, bins, n_bins};
}

TEST(Gamma, PriorOnlyMeanAndMedian) {
  const PriorConfig priors;
  const std::vector<double> none;
  const std::vector<BinIndex> no_bins;
  const auto post = AggregateGamma(Rows(none, none, none, no_bins, 2), priors);
  ASSERT_EQ(post.size(), 2u);
  EXPECT_NEAR(GammaPointEstimate(post[0], Estimator::kMean), 1.1916536577809027, 1e-15);
  const double oracle =
      BisectMedian([](double x) { return ErlangCdf(2, x); }, 0.0, 10.0) / 1.67834;
  EXPECT_NEAR(GammaPointEstimate(post[0], Estimator::kMedian), oracle, 1e-12);
  // The rounded rate puts the prior median 4.2e-6 above 1.
  EXPECT_NEAR(oracle, 1.0000041648394608, 1e-12);
  EXPECT_NEAR(oracle, 1.0, 1e-5);
}

TEST(Gamma, HandExampleBin) {
  const std::vector<double> y = {2, 2, 1, 0}, yhat = {2, 2, 1, 1}, w;
  const std::vector<BinIndex> bins = {0, 0, 1, 2};  // bin 2 is reserved
  const auto post = AggregateGamma(Rows(y, yhat, w, bins, 3), PriorConfig{});
  EXPECT_DOUBLE_EQ(post[0].alpha, 6.0);
  EXPECT_DOUBLE_EQ(post[0].beta, 5.67834);
  EXPECT_EQ(post[0].count, 2u);
  EXPECT_EQ(post[2].count, 0u);
  EXPECT_NEAR(GammaPointEstimate(post[0], Estimator::kMean), 1.0566468369276936, 1e-15);
  EXPECT_NEAR(GammaPointEstimate(post[1], Estimator::kMean), 3.0 / 2.67834, 1e-15);
}

TEST(Gamma, MedianOfShapeThree) {
  const double oracle = BisectMedian([](double x) { return ErlangCdf(3, x); }, 0.0, 20.0) / 2.0;
  EXPECT_NEAR(oracle, 1.3370301568617795, 1e-12);
  BinPosterior p;
  p.alpha = 3.0;
  p.beta = 2.0;
  EXPECT_NEAR(GammaPointEstimate(p, Estimator::kMedian), oracle, 1e-12);
  p.alpha = 0.0;
  EXPECT_THROW(GammaPointEstimate(p, Estimator::kMean), DomainError);
}

TEST(Gamma, LogFactorUncertainty) {
  EXPECT_NEAR(LogFactorUncertainty(2.0), 0.636761421655053, 1e-14);
  EXPECT_NEAR(LogFactorUncertainty(1.0), 0.832554611157698, 1e-14);
  EXPECT_NEAR(LogFactorUncertainty(1e6), std::sqrt(std::log(1.0 + 1e6) - std::log(1e6)), 1e-9);
  EXPECT_THROW(LogFactorUncertainty(0.0), DomainError);
}

TEST(Gamma, RejectsNegativeWeightsAndNaN) {
  const std::vector<double> y = {1}, yhat = {1}, w = {-1};
  const std::vector<BinIndex> bins = {0};
  EXPECT_THROW(AggregateGamma(Rows(y, yhat, w, bins, 2), PriorConfig{}), ModeError);
  const std::vector<double> ynan = {std::nan("")}, w1 = {1};
  EXPECT_THROW(AggregateGamma(Rows(ynan, yhat, w1, bins, 2), PriorConfig{}), DataError);
}

TEST(Gamma, MergeOfPartitionsEqualsWhole) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 4.0);
  std::uniform_int_distribution<BinIndex> b(0, 5);
  std::vector<double> y(500), yhat(500), w(500);
  std::vector<BinIndex> bins(500);
  for (std::size_t i = 0; i < 500; ++i) {
    y[i] = std::floor(u(rng));
    yhat[i] = u(rng);
    w[i] = u(rng);
    bins[i] = b(rng);
  }
  const PriorConfig priors;
  const auto whole = AggregateGamma(Rows(y, yhat, w, bins, 6), priors);
  auto part = [&](std::size_t lo, std::size_t hi) {
    const std::vector<double> ys(y.begin() + lo, y.begin() + hi);
    const std::vector<double> ps(yhat.begin() + lo, yhat.begin() + hi);
    const std::vector<double> ws(w.begin() + lo, w.begin() + hi);
    const std::vector<BinIndex> bs(bins.begin() + lo, bins.begin() + hi);
    return AggregateGamma(Rows(ys, ps, ws, bs, 6), priors);
  };
  auto merged = part(0, 170);
  const auto rest = part(170, 500);
  for (std::size_t k = 0; k < merged.size(); ++k) {
    Merge(merged[k], rest[k], priors.gamma_alpha_prior, priors.gamma_beta_prior);
    EXPECT_NEAR(merged[k].alpha, whole[k].alpha, 1e-9);
    EXPECT_NEAR(merged[k].beta, whole[k].beta, 1e-9);
    EXPECT_EQ(merged[k].count, whole[k].count);
    EXPECT_NEAR(merged[k].sq_weight_sum, whole[k].sq_weight_sum, 1e-9);
  }
}

TEST(Beta, PointEstimateOdds) {
  BinPosterior p;
  p.alpha = 3.001;
  p.beta = 2.001;
  EXPECT_NEAR(BetaPointEstimate(p, 1.0), 1.4997501249375316, 1e-15);
  EXPECT_NEAR(BetaPointEstimate(p, 2.0), 1.4997501249375316 / 2.0, 1e-15);
  // Beta(a, 1) has median 0.5^(1/a).
  p.alpha = 3.0;
  p.beta = 1.0;
  const double q = std::pow(0.5, 1.0 / 3.0);
  EXPECT_NEAR(BetaPointEstimate(p, 1.0, Estimator::kMedian), q / (1.0 - q), 1e-10);
  p.beta = 0.0;
  EXPECT_THROW(BetaPointEstimate(p, 1.0), DomainError);
}

TEST(Beta, LogOddsUncertainty) {
  BinPosterior p;
  p.alpha = 4.0;
  p.beta = 6.0;
  // Var(q) = 24 / (100 * 11); q(1-q) = 0.24.
  EXPECT_NEAR(LogOddsUncertainty(p), std::sqrt(24.0 / 1100.0) / 0.24, 1e-14);
}

TEST(Beta, UnboostedAggregation) {
  const std::vector<double> y = {1, 0, 1, 1}, yhat = {0.5, 0.5, 0.5, 0.5}, w = {1, 2, 1, 1};
  const std::vector<BinIndex> bins = {0, 0, 0, 1};
  const auto post = AggregateBeta(Rows(y, yhat, w, bins, 2), PriorConfig{}, false);
  EXPECT_DOUBLE_EQ(post[0].alpha, 1.001 + 2.0);
  EXPECT_DOUBLE_EQ(post[0].beta, 1.001 + 2.0);
  EXPECT_DOUBLE_EQ(post[1].alpha, 1.001);  // reserved bin: prior only
}

TEST(Beta, BoostedWeightsAreNormalized) {
  // y = 1 rows weigh 1 - p, y = 0 rows weigh p.
  const std::vector<double> y = {1, 1, 0}, yhat = {0.2, 0.6, 0.3}, w;
  const std::vector<BinIndex> bins = {0, 0, 0};
  const auto post = AggregateBeta(Rows(y, yhat, w, bins, 2), PriorConfig{}, true);
  const double success = 0.8 + 0.4, failure = 0.3, total = success + failure;
  EXPECT_NEAR(post[0].alpha, 1.001 + success / total, 1e-15);
  EXPECT_NEAR(post[0].beta, 1.001 + failure / total, 1e-15);
  EXPECT_NEAR(post[0].weight_sum, total, 1e-15);
  EXPECT_NEAR(post[0].sq_weight_sum, 0.64 + 0.16 + 0.09, 1e-15);

  // Effective-size posterior rescales the fractions by (sum w)^2 / sum w^2.
  const PriorConfig priors;
  const double n_eff = total * total / 0.89;
  const BinPosterior eff = EffectiveBetaPosterior(post[0], priors);
  EXPECT_NEAR(eff.alpha, 1.001 + n_eff * success / total, 1e-12);
  EXPECT_NEAR(eff.beta, 1.001 + n_eff * failure / total, 1e-12);
  const double a = eff.alpha, b = eff.beta, t = a + b;
  const double expected =
      std::sqrt(a * b / (t * t * (t + 1))) * (1 / post[0].alpha + 1 / post[0].beta);
  EXPECT_NEAR(BoostedLogFactorUncertainty(post[0], priors), expected, 1e-14);
}

TEST(Beta, RejectsNonBinaryTargets) {
  const std::vector<double> y = {0.5}, yhat = {0.5}, w;
  const std::vector<BinIndex> bins = {0};
  EXPECT_THROW(AggregateBeta(Rows(y, yhat, w, bins, 2), PriorConfig{}, true), DataError);
}

TEST(Priors, Validation) {
  PriorConfig p;
  EXPECT_NO_THROW(p.Validate());
  p.beta_beta_prior = 0.0;
  EXPECT_THROW(p.Validate(), DomainError);
}

TEST(Gaussian, WeightedMeanResidual) {
  const std::vector<double> y = {3, 5, 1}, yhat = {1, 1, 1}, w = {1, 3, 1};
  const std::vector<BinIndex> bins = {0, 0, 1};
  const auto stats = AggregateGaussian(Rows(y, yhat, w, bins, 3));
  const GaussianEstimate e = GaussianPartialSummand(stats[0], 1e-9, 1.0);
  EXPECT_DOUBLE_EQ(e.summand, (2.0 + 12.0) / 4.0);
  EXPECT_FALSE(e.low_statistics);
  // residuals 2 (w 1), 4 (w 3): mean 3.5, variance 0.75, n_eff 4
  EXPECT_NEAR(e.sigma, std::sqrt(0.75) / 2.0, 1e-15);
  const GaussianEstimate empty = GaussianPartialSummand(stats[2], 1e-9, 1.0);
  EXPECT_TRUE(empty.low_statistics);
  EXPECT_EQ(empty.summand, 0.0);
}

TEST(Gaussian, ContrastOfSignedGroups) {
  const std::vector<double> y = {5, 7, 2, 4}, yhat = {0, 0, 0, 0}, w = {1, 1, -1, -1};
  const std::vector<BinIndex> bins = {0, 0, 0, 0};
  const auto stats = AggregateGaussian(Rows(y, yhat, w, bins, 2));
  EXPECT_DOUBLE_EQ(stats[0].weight_sum, 0.0);
  const GaussianEstimate e = ContrastPartialSummand(stats[0], 1e-9, 1.0);
  EXPECT_DOUBLE_EQ(e.summand, 6.0 - 3.0);
  // within-group variances 1 and 1, pooled sd 1, n_eff 4
  EXPECT_NEAR(e.sigma, 2.0 * 1.0 / 2.0, 1e-15);

  const std::vector<double> flipped = {-1, -1, 1, 1};
  const auto fstats = AggregateGaussian(Rows(y, yhat, flipped, bins, 2));
  const GaussianEstimate f = ContrastPartialSummand(fstats[0], 1e-9, 1.0);
  EXPECT_DOUBLE_EQ(f.summand, -e.summand);
  EXPECT_DOUBLE_EQ(f.sigma, e.sigma);
}

TEST(Gaussian, ContrastOneArmIsLowStatistics) {
  const std::vector<double> y = {5, 7}, yhat = {0, 0}, w = {-1, -1};
  const std::vector<BinIndex> bins = {0, 0};
  const auto stats = AggregateGaussian(Rows(y, yhat, w, bins, 2));
  const GaussianEstimate e = ContrastPartialSummand(stats[0], 1e-9, 1.0);
  EXPECT_TRUE(e.low_statistics);
  EXPECT_EQ(e.summand, 0.0);
}

TEST(Gaussian, ContrastWithoutNegativesIsPlainMean) {
  const std::vector<double> y = {3, 5}, yhat = {1, 2}, w = {2, 1};
  const std::vector<BinIndex> bins = {0, 0};
  const auto stats = AggregateGaussian(Rows(y, yhat, w, bins, 2));
  const GaussianEstimate a = ContrastPartialSummand(stats[0], 1e-9, 1.0);
  const GaussianEstimate b = GaussianPartialSummand(stats[0], 1e-9, 1.0);
  EXPECT_EQ(a.summand, b.summand);
  EXPECT_EQ(a.sigma, b.sigma);
}

}  // namespace
}  // namespace cycboost

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

#include "cycboost/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "cycboost/error.hpp"

namespace cycboost {

void PriorConfig::Validate() const {
  if (!(gamma_alpha_prior > 0) || !(gamma_beta_prior > 0) ||
      !(beta_alpha_prior > 0) || !(beta_beta_prior > 0)) {
    throw DomainError("all conjugate priors must be > 0");
  }
}

namespace {

void CheckShapes(const BinnedRows& rows) {
  if (rows.yhat.size() != rows.y.size() || rows.bins.size() != rows.y.size() ||
      (!rows.w.empty() && rows.w.size() != rows.y.size())) {
    throw ShapeError("aggregation columns differ in length");
  }
  if (rows.n_bins == 0) throw ShapeError("aggregation needs n_bins >= 1");
}

inline double WeightAt(const BinnedRows& rows, std::size_t i) {
  return rows.w.empty() ? 1.0 : rows.w[i];
}

[[noreturn]] void ThrowNaN(std::size_t row) {
  throw DataError("NaN in aggregation input at row " + std::to_string(row));
}

}  // namespace

std::vector<BinPosterior> AggregateGamma(const BinnedRows& rows,
                                         const PriorConfig& priors) {
  CheckShapes(rows);
  std::vector<BinPosterior> out(rows.n_bins);
  const std::size_t reserved = rows.n_bins - 1;
  for (std::size_t i = 0; i < rows.y.size(); ++i) {
    const double w = WeightAt(rows, i);
    if (w < 0) {
      throw ModeError("negative sample weight at row " + std::to_string(i) +
                      "; signed weights are only supported for uplift training");
    }
    if (std::isnan(rows.y[i]) || std::isnan(rows.yhat[i]) || std::isnan(w)) {
      ThrowNaN(i);
    }
    const BinIndex b = rows.bins[i];
    if (b >= reserved) continue;
    BinPosterior& p = out[b];
    p.alpha += w * rows.y[i];
    p.beta += w * rows.yhat[i];
    p.weight_sum += w;
    p.sq_weight_sum += w * w;
    ++p.count;
  }
  for (BinPosterior& p : out) {
    p.alpha = priors.gamma_alpha_prior + p.alpha;
    p.beta = priors.gamma_beta_prior + p.beta;
  }
  return out;
}

std::vector<BinPosterior> AccumulateBeta(const BinnedRows& rows, bool boost_weights) {
  CheckShapes(rows);
  std::vector<BinPosterior> out(rows.n_bins);
  const std::size_t reserved = rows.n_bins - 1;
  for (std::size_t i = 0; i < rows.y.size(); ++i) {
    const double y = rows.y[i];
    if (std::isnan(y) || std::isnan(rows.yhat[i])) ThrowNaN(i);
    if (y != 0.0 && y != 1.0) {
      throw DataError("classification target must be 0 or 1, row " +
                      std::to_string(i) + " has " + std::to_string(y));
    }
    const BinIndex b = rows.bins[i];
    if (b >= reserved) continue;
    double w = WeightAt(rows, i);
    if (boost_weights) {
      const double p = rows.yhat[i];
      w *= (y == 1.0) ? 1.0 - p : p;
    }
    BinPosterior& post = out[b];
    post.alpha += w * y;
    post.beta += w * (1.0 - y);
    post.weight_sum += w;
    post.sq_weight_sum += w * w;
    ++post.count;
  }
  return out;
}

std::vector<BinPosterior> FinalizeBeta(std::vector<BinPosterior> raw,
                                       const PriorConfig& priors,
                                       bool boost_weights) {
  for (BinPosterior& p : raw) {
    double success = p.alpha;
    double failure = p.beta;
    if (boost_weights) {
      if (p.weight_sum > 0) {
        success /= p.weight_sum;
        failure /= p.weight_sum;
      } else {
        success = failure = 0.0;
      }
    }
    p.alpha = priors.beta_alpha_prior + success;
    p.beta = priors.beta_beta_prior + failure;
  }
  return raw;
}

std::vector<BinPosterior> AggregateBeta(const BinnedRows& rows,
                                        const PriorConfig& priors,
                                        bool boost_weights) {
  return FinalizeBeta(AccumulateBeta(rows, boost_weights), priors, boost_weights);
}

std::vector<GaussianBinStats> AggregateGaussian(const BinnedRows& rows) {
  CheckShapes(rows);
  std::vector<GaussianBinStats> out(rows.n_bins);
  const std::size_t reserved = rows.n_bins - 1;
  for (std::size_t i = 0; i < rows.y.size(); ++i) {
    const double w = WeightAt(rows, i);
    const double y = rows.y[i];
    const double yhat = rows.yhat[i];
    if (std::isnan(y) || std::isnan(yhat) || std::isnan(w)) ThrowNaN(i);
    const BinIndex b = rows.bins[i];
    if (b >= reserved) continue;
    GaussianBinStats& s = out[b];
    const double r = y - yhat;
    const double aw = std::fabs(w);
    s.weighted_residual_sum += w * r;
    s.weight_sum += w;
    ++s.count;
    s.abs_weight_sum += aw;
    s.sq_weight_sum += w * w;
    s.abs_residual_sum += aw * r;
    s.abs_sq_residual_sum += aw * (r * r);
    if (w > 0) {
      s.pos_weight_sum += w;
      s.pos_target_sum += w * y;
      s.pos_target_sq_sum += w * (y * y);
    } else if (w < 0) {
      s.neg_weight_sum += aw;
      s.neg_target_sum += aw * y;
      s.neg_target_sq_sum += aw * (y * y);
    }
    s.abs_pred_sum += aw * yhat;
  }
  return out;
}

void Merge(BinPosterior& into, const BinPosterior& other, double alpha_prior,
           double beta_prior) {
  into.alpha += other.alpha - alpha_prior;
  into.beta += other.beta - beta_prior;
  into.weight_sum += other.weight_sum;
  into.sq_weight_sum += other.sq_weight_sum;
  into.count += other.count;
}

BinPosterior EffectiveBetaPosterior(const BinPosterior& boosted, const PriorConfig& priors) {
  BinPosterior out = boosted;
  if (!(boosted.sq_weight_sum > 0)) return out;
  const double n_eff = boosted.weight_sum * boosted.weight_sum / boosted.sq_weight_sum;
  out.alpha = priors.beta_alpha_prior + n_eff * (boosted.alpha - priors.beta_alpha_prior);
  out.beta = priors.beta_beta_prior + n_eff * (boosted.beta - priors.beta_beta_prior);
  return out;
}

void Merge(GaussianBinStats& into, const GaussianBinStats& other) {
  into.weighted_residual_sum += other.weighted_residual_sum;
  into.weight_sum += other.weight_sum;
  into.count += other.count;
  into.abs_weight_sum += other.abs_weight_sum;
  into.sq_weight_sum += other.sq_weight_sum;
  into.abs_residual_sum += other.abs_residual_sum;
  into.abs_sq_residual_sum += other.abs_sq_residual_sum;
  into.pos_weight_sum += other.pos_weight_sum;
  into.neg_weight_sum += other.neg_weight_sum;
  into.pos_target_sum += other.pos_target_sum;
  into.neg_target_sum += other.neg_target_sum;
  into.pos_target_sq_sum += other.pos_target_sq_sum;
  into.neg_target_sq_sum += other.neg_target_sq_sum;
  into.abs_pred_sum += other.abs_pred_sum;
}

namespace {

// Median of Gamma(shape, rate 1).
double UnitGammaMedian(double shape) {
  const auto below_half = [shape](double x) {
    return boost::math::gamma_p(shape, x) < 0.5;
  };
  double lo = 0.0;
  double hi = std::max(1.0, shape);
  while (below_half(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  for (int iter = 0; iter < 400 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (below_half(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double GammaPointEstimate(const BinPosterior& posterior, Estimator estimator) {
  if (!(posterior.alpha > 0) || !(posterior.beta > 0)) {
    throw DomainError("Gamma posterior needs alpha > 0 and beta > 0");
  }
  if (estimator == Estimator::kMean) return posterior.alpha / posterior.beta;
  return UnitGammaMedian(posterior.alpha) / posterior.beta;
}

double LogFactorUncertainty(double alpha) {
  if (!(alpha > 0)) throw DomainError("log-factor uncertainty needs alpha > 0");
  // log1p(1/alpha) == ln(1 + alpha) - ln(alpha), without the cancellation.
  return std::sqrt(std::log1p(1.0 / alpha));
}

double BetaPointEstimate(const BinPosterior& posterior, double reference_odds,
                         Estimator estimator) {
  const double total = posterior.alpha + posterior.beta;
  if (!(total > 0) || !(posterior.alpha > 0) || !(posterior.beta > 0)) {
    throw DomainError("Beta posterior needs alpha > 0 and beta > 0");
  }
  if (!(reference_odds > 0)) throw DomainError("reference odds must be > 0");
  const double q = estimator == Estimator::kMedian
                       ? boost::math::ibeta_inv(posterior.alpha, posterior.beta, 0.5)
                       : posterior.alpha / total;
  return (q / (1.0 - q)) / reference_odds;
}

double BoostedLogFactorUncertainty(const BinPosterior& boosted, const PriorConfig& priors) {
  if (!(boosted.alpha > 0) || !(boosted.beta > 0)) {
    throw DomainError("Beta posterior needs alpha, beta > 0");
  }
  const BinPosterior eff = EffectiveBetaPosterior(boosted, priors);
  const double total = eff.alpha + eff.beta;
  const double sd_fraction = std::sqrt(eff.alpha * eff.beta / (total * total * (total + 1.0)));
  return sd_fraction * (1.0 / boosted.alpha + 1.0 / boosted.beta);
}

double LogOddsUncertainty(const BinPosterior& posterior) {
  const double a = posterior.alpha;
  const double b = posterior.beta;
  if (!(a > 0) || !(b > 0)) throw DomainError("Beta posterior needs alpha, beta > 0");
  const double total = a + b;
  const double q = a / total;
  const double variance = a * b / (total * total * (total + 1.0));
  return std::sqrt(variance) / (q * (1.0 - q));
}

namespace {

double ResidualSd(const GaussianBinStats& s) {
  if (!(s.abs_weight_sum > 0)) return 0.0;
  const double mean = s.abs_residual_sum / s.abs_weight_sum;
  const double var = s.abs_sq_residual_sum / s.abs_weight_sum - mean * mean;
  return var > 0 ? std::sqrt(var) : 0.0;
}

double EffectiveSize(const GaussianBinStats& s) {
  if (s.neg_weight_sum == 0.0) return s.abs_weight_sum;
  return s.sq_weight_sum > 0 ? s.abs_weight_sum * s.abs_weight_sum / s.sq_weight_sum : 0.0;
}

double SummandSigma(const GaussianBinStats& s, double fallback_sigma, double scale) {
  const double n_eff = EffectiveSize(s);
  double sd = ResidualSd(s);
  if (n_eff < 2.0 || !(sd > 0)) sd = fallback_sigma;
  const double sigma = scale * sd / std::sqrt(std::max(n_eff, 1.0));
  return std::max(sigma, 1e-12);
}

}  // namespace

GaussianEstimate GaussianPartialSummand(const GaussianBinStats& stats,
                                        double eps_w, double fallback_sigma) {
  GaussianEstimate e;
  e.sigma = SummandSigma(stats, fallback_sigma, 1.0);
  const double denom = std::max(stats.weight_sum, eps_w);
  if (stats.weight_sum < eps_w) {
    e.low_statistics = true;
    e.summand = 0.0;
    return e;
  }
  e.summand = stats.weighted_residual_sum / denom;
  return e;
}

GaussianEstimate ContrastPartialSummand(const GaussianBinStats& stats,
                                        double eps_w, double fallback_sigma) {
  if (stats.neg_weight_sum == 0.0) {
    return GaussianPartialSummand(stats, eps_w, fallback_sigma);
  }
  GaussianEstimate e;
  if (stats.pos_weight_sum < eps_w || stats.neg_weight_sum < eps_w) {
    e.sigma = std::max(fallback_sigma, 1e-12);
    e.low_statistics = true;
    return e;
  }
  const double pos_mean = stats.pos_target_sum / stats.pos_weight_sum;
  const double neg_mean = stats.neg_target_sum / stats.neg_weight_sum;
  const double pooled_var =
      std::max(stats.pos_target_sq_sum - stats.pos_weight_sum * pos_mean * pos_mean, 0.0) +
      std::max(stats.neg_target_sq_sum - stats.neg_weight_sum * neg_mean * neg_mean, 0.0);
  double sd = std::sqrt(pooled_var / stats.abs_weight_sum);
  const double n_eff = EffectiveSize(stats);
  if (n_eff < 2.0 || !(sd > 0)) sd = fallback_sigma;
  e.sigma = std::max(2.0 * sd / std::sqrt(std::max(n_eff, 1.0)), 1e-12);
  const double contrast = pos_mean - neg_mean;
  e.summand = contrast - stats.abs_pred_sum / stats.abs_weight_sum;
  return e;
}

}  // namespace cycboost

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

#include "cycboost/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cycboost/error.hpp"
#include "cycboost/kernels.hpp"

namespace cycboost {

std::string_view ToString(Mode mode) {
  switch (mode) {
    case Mode::kMultiplicative:
      return "multiplicative";
    case Mode::kAdditive:
      return "additive";
    case Mode::kClassification:
      return "classification";
  }
  return "unknown";
}

std::string_view ToString(LearningRateShape shape) {
  return shape == LearningRateShape::kLogistic ? "logistic" : "linear";
}

std::string_view ToString(StopMetric metric) {
  return metric == StopMetric::kMse ? "MSE" : "MAD";
}

std::string_view ToString(Estimator estimator) {
  return estimator == Estimator::kMedian ? "median" : "mean";
}

Mode ParseMode(std::string_view text) {
  if (text == "multiplicative") return Mode::kMultiplicative;
  if (text == "additive") return Mode::kAdditive;
  if (text == "classification") return Mode::kClassification;
  throw SchemaError("unknown mode '" + std::string(text) + "'");
}

LearningRateShape ParseLearningRateShape(std::string_view text) {
  if (text == "linear") return LearningRateShape::kLinear;
  if (text == "logistic") return LearningRateShape::kLogistic;
  throw SchemaError("unknown learning-rate shape '" + std::string(text) + "'");
}

StopMetric ParseStopMetric(std::string_view text) {
  if (text == "MAD" || text == "mad") return StopMetric::kMad;
  if (text == "MSE" || text == "mse") return StopMetric::kMse;
  throw SchemaError("unknown stop metric '" + std::string(text) + "'");
}

Estimator ParseEstimator(std::string_view text) {
  if (text == "mean") return Estimator::kMean;
  if (text == "median") return Estimator::kMedian;
  throw SchemaError("unknown estimator '" + std::string(text) + "'");
}

const SmootherConfig& TrainingConfig::SmoothingFor(const std::string& feature) const {
  const auto it = feature_smoothing.find(feature);
  return it == feature_smoothing.end() ? smoothing : it->second;
}

void TrainingConfig::Validate() const {
  ValidateFeatureSpecs(features);
  if (max_cycles < 0) throw DomainError("max_cycles must be >= 0");
  if (!(learning_rate_start > 0.0 && learning_rate_start <= 1.0)) {
    throw DomainError("learning_rate_start must lie in (0, 1]");
  }
  if (!(stop_rel_tol >= 0.0)) throw DomainError("stop_rel_tol must be >= 0");
  priors.Validate();
  const auto check = [](const SmootherConfig& s) {
    if (s.max_degree < 0) throw DomainError("smoothing max_degree must be >= 0");
    if (s.svd_rank < 1) throw DomainError("smoothing svd_rank must be >= 1");
  };
  check(smoothing);
  for (const auto& [name, s] : feature_smoothing) check(s);
}

const FeatureModel& Model::Feature(std::string_view name) const {
  for (const FeatureModel& f : features) {
    if (f.spec.name == name) return f;
  }
  throw SchemaError("model has no feature '" + std::string(name) + "'");
}

double LearningRate(int t, int max_cycles, double eta_start, LearningRateShape shape) {
  if (max_cycles < 1 || t < 1 || t > max_cycles) {
    throw DomainError("learning rate requested for cycle " + std::to_string(t) +
                      " outside [1, " + std::to_string(max_cycles) + "]");
  }
  if (!(eta_start > 0.0 && eta_start <= 1.0)) {
    throw DomainError("learning_rate_start must lie in (0, 1]");
  }
  if (t == max_cycles) return 1.0;
  const double T = max_cycles;
  double ramp = 0.0;
  if (shape == LearningRateShape::kLinear) {
    ramp = (t - 1.0) / (T - 1.0);
  } else {
    const double steepness = 8.0 / T;
    const auto logistic = [&](double x) {
      return 1.0 / (1.0 + std::exp(-steepness * (x - T / 2.0)));
    };
    ramp = (logistic(t) - logistic(1.0)) / (logistic(T) - logistic(1.0));
  }
  return eta_start + (1.0 - eta_start) * ramp;
}

double ConvergenceMetric(std::span<const double> y, std::span<const double> yhat,
                         StopMetric metric) {
  return WeightedConvergenceMetric(y, yhat, {}, metric);
}

double WeightedConvergenceMetric(std::span<const double> y,
                                 std::span<const double> yhat,
                                 std::span<const double> weights, StopMetric metric) {
  if (y.empty()) throw DomainError("convergence metric of an empty sample");
  if (yhat.size() != y.size() || (!weights.empty() && weights.size() != y.size())) {
    throw ShapeError("convergence metric inputs differ in length");
  }
  const auto& k = kernels::Active();
  double total = static_cast<double>(y.size());
  std::vector<double> abs_weights;
  if (!weights.empty()) {
    abs_weights.resize(weights.size());
    total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      abs_weights[i] = std::fabs(weights[i]);
      total += abs_weights[i];
    }
    if (!(total > 0)) throw DomainError("convergence metric with zero total weight");
  }
  const double sum = metric == StopMetric::kMad
                         ? k.weighted_abs_error(y, yhat, abs_weights)
                         : k.weighted_sq_error(y, yhat, abs_weights);
  return sum / total;
}

std::vector<std::vector<BinIndex>> BinRows(const Model& model, const Table& rows) {
  std::vector<std::vector<BinIndex>> bins;
  bins.reserve(model.features.size());
  for (const FeatureModel& f : model.features) {
    bins.push_back(BinFeature(f.binning, f.spec.name, rows));
  }
  return bins;
}

std::vector<double> Predict(const Model& model, const Table& rows) {
  const auto bins = BinRows(model, rows);
  const auto& k = kernels::Active();
  std::vector<double> out(rows.num_rows(), model.mu);
  for (std::size_t j = 0; j < model.features.size(); ++j) {
    const auto& response = model.features[j].table.response;
    if (IsMultiplicative(model.mode)) {
      k.gather_multiply(out, bins[j], response);
    } else {
      k.gather_add(out, bins[j], response);
    }
  }
  if (model.mode == Mode::kClassification) k.odds_to_probability(out, out);
  return out;
}

Model Train(const Table& data, std::span<const double> y,
            std::span<const double> weights, const TrainingConfig& config,
            const TrainObserver& observer) {
  return detail::TrainImpl(data, y, weights, config, {}, observer);
}

namespace detail {
namespace {

void ValidateInputs(const Table& data, std::span<const double> y,
                    std::span<const double> w, Mode mode, bool signed_weights) {
  if (y.size() != data.num_rows()) {
    throw ShapeError("target has " + std::to_string(y.size()) + " rows, data has " +
                     std::to_string(data.num_rows()));
  }
  if (!w.empty() && w.size() != y.size()) {
    throw ShapeError("weights have " + std::to_string(w.size()) + " rows, data has " +
                     std::to_string(y.size()));
  }
  if (y.empty()) throw DataError("cannot train on an empty dataset");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i])) {
      throw DataError("target is not finite at row " + std::to_string(i));
    }
    switch (mode) {
      case Mode::kMultiplicative:
        if (y[i] < 0) {
          throw ModeError("multiplicative mode needs y >= 0; row " + std::to_string(i) +
                          " has " + FormatNumber(y[i]));
        }
        break;
      case Mode::kClassification:
        if (y[i] != 0.0 && y[i] != 1.0) {
          throw ModeError("classification mode needs y in {0, 1}; row " +
                          std::to_string(i) + " has " + FormatNumber(y[i]));
        }
        break;
      case Mode::kAdditive:
        break;
    }
    if (!w.empty()) {
      if (!std::isfinite(w[i])) {
        throw DataError("sample weight is not finite at row " + std::to_string(i));
      }
      if (w[i] < 0 && !signed_weights) {
        throw ModeError("negative sample weight at row " + std::to_string(i) +
                        "; signed weights are only supported for uplift training");
      }
    }
  }
}

double WeightAt(std::span<const double> w, std::size_t i) {
  return w.empty() ? 1.0 : w[i];
}

double WeightedMean(std::span<const double> y, std::span<const double> w) {
  double sy = 0.0;
  double sw = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double wi = WeightAt(w, i);
    sy += wi * y[i];
    sw += wi;
  }
  if (!(sw > 0)) throw DegenerateWeightsError("total sample weight is zero");
  return sy / sw;
}

// Positive-weight group mean minus negative-weight group mean.
double SignedContrastMean(std::span<const double> y, std::span<const double> w) {
  double pos_y = 0.0, pos_w = 0.0, neg_y = 0.0, neg_w = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (w[i] > 0) {
      pos_y += w[i] * y[i];
      pos_w += w[i];
    } else if (w[i] < 0) {
      neg_y += -w[i] * y[i];
      neg_w += -w[i];
    }
  }
  if (!(pos_w > 0) || !(neg_w > 0)) {
    throw DegenerateWeightsError("signed-weight contrast needs both weight signs");
  }
  return pos_y / pos_w - neg_y / neg_w;
}

double WeightedSd(std::span<const double> y, std::span<const double> w) {
  double sw = 0.0, sy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double wi = std::fabs(WeightAt(w, i));
    sw += wi;
    sy += wi * y[i];
    syy += wi * y[i] * y[i];
  }
  if (!(sw > 0)) return 0.0;
  const double mean = sy / sw;
  const double var = syy / sw - mean * mean;
  return var > 0 ? std::sqrt(var) : 0.0;
}

bool SmoothingOff(const SmootherConfig& cfg) {
  return !cfg.custom && cfg.continuous_method == ContinuousSmoother::kNone &&
         cfg.categorical_method == CategoricalSmoother::kNone;
}

// Shrinks the non-empty bins; empty bins stay neutral.
std::vector<double> ShrinkObserved(const std::vector<double>& link,
                                   const std::vector<double>& sigma,
                                   const std::vector<bool>& empty) {
  SmoothingInput input;
  std::vector<std::size_t> index;
  for (std::size_t k = 0; k < link.size(); ++k) {
    if (empty[k]) continue;
    index.push_back(k);
    input.link_values.push_back(link[k]);
    input.sigmas.push_back(sigma[k]);
  }
  std::vector<double> out(link.size(), 0.0);
  if (index.empty()) return out;
  const std::vector<double> shrunk = ShrinkCategorical(input);
  for (std::size_t i = 0; i < index.size(); ++i) out[index[i]] = shrunk[i];
  return out;
}

std::vector<double> AxisCenters(const BinDefinition& axis) {
  std::vector<double> centers(axis.num_regular_bins());
  for (std::size_t k = 0; k < centers.size(); ++k) {
    centers[k] = axis.kind() == FeatureKind::kContinuous
                     ? axis.Center(static_cast<BinIndex>(k))
                     : static_cast<double>(k);
  }
  return centers;
}

// Smooths the regular bins of one feature table in link space.
std::vector<double> SmoothTable(const BinDefinition& def,
                                const std::vector<double>& link,
                                const std::vector<double>& sigma,
                                const std::vector<bool>& empty,
                                const SmootherConfig& cfg) {
  if (SmoothingOff(cfg)) return link;
  if (cfg.custom) {
    SmoothingInput input{{}, link, sigma};
    if (def.kind() == FeatureKind::kContinuous) input.bin_centers = AxisCenters(def);
    return cfg.custom(input);
  }
  switch (def.kind()) {
    case FeatureKind::kContinuous:
      return SmoothContinuous({AxisCenters(def), link, sigma}, cfg);
    case FeatureKind::kCategorical:
      if (cfg.categorical_method == CategoricalSmoother::kNone) return link;
      return ShrinkObserved(link, sigma, empty);
    case FeatureKind::kComposed:
      break;
  }

  const auto& parts = def.components();
  const auto shrink_flat = [&]() {
    return cfg.categorical_method == CategoricalSmoother::kNone
               ? link
               : ShrinkObserved(link, sigma, empty);
  };
  if (parts.size() != 2) return shrink_flat();

  const bool cont0 = parts[0].kind() == FeatureKind::kContinuous;
  const bool cont1 = parts[1].kind() == FeatureKind::kContinuous;
  TwoDimSmoother method;
  if (cfg.two_dim_method) {
    method = *cfg.two_dim_method;
  } else if (cont0 && cont1) {
    method = TwoDimSmoother::kTruncatedSvd;
  } else if (cont0 || cont1) {
    method = TwoDimSmoother::kGroupBy;
  } else {
    return shrink_flat();
  }

  LinkGrid grid{parts[0].num_regular_bins(), parts[1].num_regular_bins(), link, sigma};
  if (method == TwoDimSmoother::kTruncatedSvd) {
    return SmoothTwoDimSvd(grid, cfg.svd_rank).values;
  }
  // Group along the categorical axis; with two continuous axes, by rows.
  const bool group_rows = !cont0 || cont1;
  const GridAxis axis = group_rows ? GridAxis::kRows : GridAxis::kColumns;
  const std::vector<double> centers = AxisCenters(group_rows ? parts[1] : parts[0]);
  return SmoothTwoDimGroupBy(grid, axis, centers, cfg).values;
}

}  // namespace

Model TrainImpl(const Table& data, std::span<const double> y,
                std::span<const double> weights, const TrainingConfig& config,
                const TrainOptions& options, const TrainObserver& observer) {
  config.Validate();
  if (options.signed_weights && config.mode != Mode::kAdditive) {
    throw ModeError("signed sample weights require additive mode");
  }
  ValidateInputs(data, y, weights, config.mode, options.signed_weights);

  const std::size_t n = y.size();
  const auto& k = kernels::Active();
  const bool has_negative =
      options.signed_weights &&
      std::any_of(weights.begin(), weights.end(), [](double w) { return w < 0; });

  Model model;
  model.mode = config.mode;
  model.config = config;
  model.config.smoothing.custom = nullptr;
  for (auto& [name, s] : model.config.feature_smoothing) s.custom = nullptr;

  // Global mean.
  switch (config.mode) {
    case Mode::kMultiplicative:
      model.mu = WeightedMean(y, weights);
      if (model.mu == 0.0) {
        throw DegenerateTargetError("multiplicative mode needs a target that is not all zero");
      }
      break;
    case Mode::kAdditive:
      model.mu = has_negative ? SignedContrastMean(y, weights) : WeightedMean(y, weights);
      break;
    case Mode::kClassification: {
      const double rate = WeightedMean(y, weights);
      if (rate <= 0.0 || rate >= 1.0) {
        throw DegenerateTargetError("classification target has a single class");
      }
      model.mu = rate / (1.0 - rate);
      break;
    }
  }

  // Binning and neutral tables.
  std::vector<std::vector<BinIndex>> bins;
  for (const FeatureSpec& spec : config.features) {
    FeatureModel f;
    f.spec = spec;
    if (spec.kind == FeatureKind::kComposed) {
      std::vector<BinDefinition> parts;
      for (const std::string& component : spec.components) {
        parts.push_back(model.Feature(component).binning);
      }
      f.binning = BinDefinition::Composed(spec.components, std::move(parts));
    } else {
      f.binning = FitBinning(data.GetColumn(spec.name), spec);
    }
    bins.push_back(BinFeature(f.binning, spec.name, data));

    const std::size_t nb = f.binning.num_bins();
    FactorTable& t = f.table;
    t.feature = spec.name;
    t.link.assign(nb, 0.0);
    t.response.assign(nb, IsMultiplicative(config.mode) ? 1.0 : 0.0);
    t.sigma.assign(nb, 0.0);
    t.count.assign(nb, 0);
    for (const BinIndex b : bins.back()) ++t.count[b];
    for (std::size_t b = 0; b < nb; ++b) {
      t.labels.push_back(f.binning.Label(static_cast<BinIndex>(b)));
    }
    model.features.push_back(std::move(f));
  }

  double abs_weight_total = 0.0;
  for (std::size_t i = 0; i < n; ++i) abs_weight_total += std::fabs(WeightAt(weights, i));
  const double eps_w = 1e-9 * abs_weight_total;
  const double target_sd = std::max(WeightedSd(y, weights), 1e-12);

  // Composition state: yhat, or odds in classification; plus probabilities.
  std::vector<double> state(n, model.mu);
  std::vector<double> prob;
  if (config.mode == Mode::kClassification) {
    prob.resize(n);
    k.odds_to_probability(state, prob);
  }
  const auto prediction = [&]() -> std::span<const double> {
    return config.mode == Mode::kClassification ? std::span<const double>(prob)
                                                : std::span<const double>(state);
  };

  TrainingHistory& history = model.history;
  history.metric.push_back(
      WeightedConvergenceMetric(y, prediction(), weights, config.stop_metric));
  std::vector<FactorTable> best_tables;
  for (const FeatureModel& f : model.features) best_tables.push_back(f.table);
  // Selection runs over cycles 1..T; the global-mean state only survives T = 0.
  double best_metric = std::numeric_limits<double>::infinity();

  const double prior_gamma_sigma = LogFactorUncertainty(config.priors.gamma_alpha_prior);
  const double prior_beta_sigma = LogOddsUncertainty(
      {config.priors.beta_alpha_prior, config.priors.beta_beta_prior, 0.0, 0});

  for (int cycle = 1; cycle <= config.max_cycles; ++cycle) {
    const double eta = LearningRate(cycle, config.max_cycles, config.learning_rate_start,
                                    config.learning_rate_shape);
    history.eta.push_back(eta);

    for (std::size_t j = 0; j < model.features.size(); ++j) {
      FeatureModel& feature = model.features[j];
      FactorTable& table = feature.table;
      const std::size_t nb = feature.binning.num_bins();
      const std::size_t regular = nb - 1;
      // A single regular bin is collinear with mu and stays neutral.
      if (regular <= 1) continue;

      const BinnedRows rows{y, prediction(), weights, bins[j], nb};
      std::vector<double> link(regular);
      std::vector<double> sigma(regular);
      std::vector<bool> empty(regular);

      switch (config.mode) {
        case Mode::kMultiplicative: {
          const auto post = AggregateGamma(rows, config.priors);
          for (std::size_t b = 0; b < regular; ++b) {
            empty[b] = post[b].count == 0 || !(post[b].weight_sum > 0);
            if (empty[b]) {
              link[b] = 0.0;
              sigma[b] = prior_gamma_sigma;
              continue;
            }
            const double g = GammaPointEstimate(post[b], config.priors.estimator);
            link[b] = table.link[b] + eta * std::log(g);
            sigma[b] = LogFactorUncertainty(post[b].alpha);
          }
          break;
        }
        case Mode::kClassification: {
          const bool boost = config.boost_classification_weights;
          const auto post = AggregateBeta(rows, config.priors, boost);
          std::vector<double> pred_success(regular, 0.0);
          std::vector<double> pred_failure(regular, 0.0);
          if (!boost) {
            for (std::size_t i = 0; i < n; ++i) {
              const BinIndex b = bins[j][i];
              if (b >= regular) continue;
              const double w = WeightAt(weights, i);
              pred_success[b] += w * prob[i];
              pred_failure[b] += w * (1.0 - prob[i]);
            }
          }
          for (std::size_t b = 0; b < regular; ++b) {
            empty[b] = post[b].count == 0 || !(post[b].weight_sum > 0);
            if (empty[b]) {
              link[b] = 0.0;
              sigma[b] = prior_beta_sigma;
              continue;
            }
            // Boosting weights balance a calibrated bin to a success
            // fraction of 1/2, so the reference odds are 1; otherwise the
            // reference is the same posterior built from the predictions.
            double reference = 1.0;
            if (!boost) {
              reference = (config.priors.beta_alpha_prior + pred_success[b]) /
                          (config.priors.beta_beta_prior + pred_failure[b]);
            }
            const double g = BetaPointEstimate(post[b], reference, config.priors.estimator);
            link[b] = table.link[b] + eta * std::log(g);
            sigma[b] = boost ? BoostedLogFactorUncertainty(post[b], config.priors)
                             : LogOddsUncertainty(post[b]);
          }
          break;
        }
        case Mode::kAdditive: {
          const auto stats = AggregateGaussian(rows);
          for (std::size_t b = 0; b < regular; ++b) {
            empty[b] = stats[b].count == 0 || !(stats[b].abs_weight_sum > 0);
            if (empty[b]) {
              link[b] = 0.0;
              sigma[b] = target_sd;
              continue;
            }
            GaussianEstimate e;
            if (!has_negative) {
              e = GaussianPartialSummand(stats[b], eps_w, target_sd);
            } else if (stats[b].neg_weight_sum < eps_w || stats[b].pos_weight_sum < eps_w) {
              // One arm only: the contrast is not identified in this bin.
              e.sigma = target_sd;
              e.low_statistics = true;
            } else {
              e = ContrastPartialSummand(stats[b], eps_w, target_sd);
            }
            link[b] = table.link[b] + eta * e.summand;
            sigma[b] = e.sigma;
          }
          break;
        }
      }

      const std::vector<double> smoothed = SmoothTable(
          feature.binning, link, sigma, empty, config.SmoothingFor(feature.spec.name));

      std::vector<double> delta(nb, 0.0);
      for (std::size_t b = 0; b < regular; ++b) {
        delta[b] = smoothed[b] - table.link[b];
        table.link[b] = smoothed[b];
        table.response[b] =
            IsMultiplicative(config.mode) ? std::exp(smoothed[b]) : smoothed[b];
        table.sigma[b] = sigma[b];
      }
      if (IsMultiplicative(config.mode)) {
        for (double& d : delta) d = std::exp(d);
        k.gather_multiply(state, bins[j], delta);
        if (config.mode == Mode::kClassification) k.odds_to_probability(state, prob);
      } else {
        k.gather_add(state, bins[j], delta);
      }

      if (observer) {
        observer(UpdateEvent{cycle, j, &feature, bins[j], y, weights, prediction()});
      }
    }

    const double metric =
        WeightedConvergenceMetric(y, prediction(), weights, config.stop_metric);
    const double previous = history.metric.back();
    history.metric.push_back(metric);
    history.cycles_run = cycle;
    if (has_negative || metric < best_metric) {
      best_metric = metric;
      history.best_cycle = cycle;
      for (std::size_t j = 0; j < model.features.size(); ++j) {
        best_tables[j] = model.features[j].table;
      }
    }
    // Signed-weight training runs every cycle: the metric against the raw
    // target does not measure the contrast being fitted.
    if (!has_negative) {
      if (previous <= 0.0) break;
      if ((previous - metric) / previous < config.stop_rel_tol) break;
    }
  }

  for (std::size_t j = 0; j < model.features.size(); ++j) {
    model.features[j].table = std::move(best_tables[j]);
  }
  return model;
}

}  // namespace detail
}  // namespace cycboost

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

// Cyclic coordinate-descent training over binned features.
//
// The model is a generalized additive model with one factor table per
// feature:
//
//   multiplicative   yhat = mu * prod_j f_j[bin_j(x)]
//   additive         yhat = mu + sum_j f_j[bin_j(x)]
//   classification   p / (1 - p) = mu * prod_j f_j[bin_j(x)]
//
// Training visits the features in declared order once per cycle. For each
// feature it aggregates per-bin statistics against the current prediction,
// turns them into partial factors g through the conjugate posterior, damps
// them with the cycle's learning rate in link space, folds them into the
// table, smooths the table and refreshes the prediction. After each cycle the
// stopping metric is evaluated on the training data; the tables of the best
// cycle in 1..T are returned (ties to the earlier cycle).

#ifndef CYCBOOST_ENGINE_HPP_
#define CYCBOOST_ENGINE_HPP_

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cycboost/binning.hpp"
#include "cycboost/conjugate.hpp"
#include "cycboost/smoothing.hpp"
#include "cycboost/table.hpp"

namespace cycboost {

enum class Mode { kMultiplicative, kAdditive, kClassification };
enum class LearningRateShape { kLinear, kLogistic };
enum class StopMetric { kMad, kMse };

std::string_view ToString(Mode mode);
std::string_view ToString(LearningRateShape shape);
std::string_view ToString(StopMetric metric);
std::string_view ToString(Estimator estimator);
Mode ParseMode(std::string_view text);
LearningRateShape ParseLearningRateShape(std::string_view text);
StopMetric ParseStopMetric(std::string_view text);
Estimator ParseEstimator(std::string_view text);

// True for the modes whose tables compose by product (link = ln f).
inline bool IsMultiplicative(Mode mode) { return mode != Mode::kAdditive; }

struct TrainingConfig {
  Mode mode = Mode::kMultiplicative;
  std::vector<FeatureSpec> features;
  int max_cycles = 10;
  double learning_rate_start = 0.1;
  LearningRateShape learning_rate_shape = LearningRateShape::kLinear;
  StopMetric stop_metric = StopMetric::kMad;
  double stop_rel_tol = 1e-4;
  PriorConfig priors;
  SmootherConfig smoothing;
  std::map<std::string, SmootherConfig> feature_smoothing;  // per-feature overrides
  bool boost_classification_weights = true;

  const SmootherConfig& SmoothingFor(const std::string& feature) const;
  // Throws SchemaError / DomainError.
  void Validate() const;
};

// Per-bin parameters of one feature; the last entry is the reserved bin.
struct FactorTable {
  std::string feature;
  std::vector<double> link;      // ln f, or the summand in additive mode
  std::vector<double> response;  // exp(link), or the summand in additive mode
  std::vector<double> sigma;
  std::vector<std::size_t> count;  // training rows per bin
  std::vector<std::string> labels;
};

struct FeatureModel {
  FeatureSpec spec;
  BinDefinition binning;
  FactorTable table;
};

struct TrainingHistory {
  // metric[0] is the global-mean predictor, metric[t] the state after cycle t.
  std::vector<double> metric;
  std::vector<double> eta;  // eta[t - 1] for cycle t
  int best_cycle = 0;
  int cycles_run = 0;
};

struct Model {
  static constexpr int kFormatVersion = 1;

  Mode mode = Mode::kMultiplicative;
  // Weighted target mean; global odds p / (1 - p) in classification; the
  // signed-weight contrast for uplift models.
  double mu = 0.0;
  std::vector<FeatureModel> features;
  TrainingHistory history;
  TrainingConfig config;  // custom smoothing hooks are not retained
  int format_version = kFormatVersion;

  // Throws SchemaError for an unknown name.
  const FeatureModel& Feature(std::string_view name) const;
};

// Passed to the training observer right after each feature update.
struct UpdateEvent {
  int cycle = 0;
  std::size_t feature_index = 0;
  const FeatureModel* feature = nullptr;
  std::span<const BinIndex> bins;
  std::span<const double> y;
  std::span<const double> weights;  // empty = unit weights
  // Current prediction: yhat (multiplicative, additive) or p (classification).
  std::span<const double> prediction;
};

using TrainObserver = std::function<void(const UpdateEvent&)>;

// Trains on the rows of `data`. `weights` may be empty (unit weights) and must
// be nonnegative. Throws ModeError on target-domain violations,
// DegenerateTargetError for an all-zero multiplicative target or a
// single-class classification target, SchemaError for missing columns.
Model Train(const Table& data, std::span<const double> y,
            std::span<const double> weights, const TrainingConfig& config,
            const TrainObserver& observer = {});

// Learning rate of cycle t in [1, T]; reaches exactly 1 at t = T.
// Throws DomainError when t is out of range.
double LearningRate(int t, int max_cycles, double eta_start, LearningRateShape shape);

// Unweighted MAD or MSE. Throws DomainError on empty input.
double ConvergenceMetric(std::span<const double> y, std::span<const double> yhat,
                         StopMetric metric);

// Weighted variant used for stopping; |w| weights, empty = unit.
double WeightedConvergenceMetric(std::span<const double> y,
                                 std::span<const double> yhat,
                                 std::span<const double> weights, StopMetric metric);

// yhat (multiplicative, additive) or p (classification) per row.
// Throws SchemaError when a feature column is missing.
std::vector<double> Predict(const Model& model, const Table& rows);

// Bin indices of every model feature over `rows`, in model feature order.
std::vector<std::vector<BinIndex>> BinRows(const Model& model, const Table& rows);

namespace detail {

struct TrainOptions {
  // Accept signed sample weights and use the signed-weight contrast for
  // mu and the partial summands (additive mode only).
  bool signed_weights = false;
};

Model TrainImpl(const Table& data, std::span<const double> y,
                std::span<const double> weights, const TrainingConfig& config,
                const TrainOptions& options, const TrainObserver& observer);

}  // namespace detail
}  // namespace cycboost

#endif  // CYCBOOST_ENGINE_HPP_

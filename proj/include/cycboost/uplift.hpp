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

// Individual treatment effects by background subtraction: additive training
// with signed group weights (+ treated, - control). Every bin sum becomes a
// treated-minus-control difference, so the model predicts the effect itself.
//
// mu and the bin summands use the contrast of the two group means,
//
//   mean_{w>0}(y) - mean_{w<0}(y) - mean_{|w|}(yhat),
//
// which stays defined when group normalization makes sum(w) exactly zero.

#ifndef CYCBOOST_UPLIFT_HPP_
#define CYCBOOST_UPLIFT_HPP_

#include <span>
#include <string>
#include <vector>

#include "cycboost/engine.hpp"
#include "cycboost/table.hpp"

namespace cycboost {

struct UpliftOptions {
  // Rescale each group to half the total |w| so unequal group sizes do not
  // bias the subtraction. Off: raw signed weights.
  bool normalize_groups = true;
  // Warn when |sum w| / sum |w| of the raw weights exceeds this.
  double imbalance_threshold = 0.1;
};

struct UpliftModel {
  Model model;  // additive; mu is the average effect
  double imbalance = 0.0;  // |sum w| / sum |w| of the raw weights
  std::vector<std::string> warnings;
};

// Treated weights w / W+ and control weights w / W-, both scaled by
// (W+ + W-) / 2, where W+- are the absolute group masses.
std::vector<double> NormalizeGroupWeights(std::span<const double> weights);

// Throws ModeError unless config.mode is additive, or when the weights have a
// single sign (raw mode accepts all-positive weights, which reduces to plain
// additive training); DegenerateWeightsError when sum |w| is zero.
UpliftModel TrainUplift(const Table& data, std::span<const double> y,
                        std::span<const double> weights, const TrainingConfig& config,
                        const UpliftOptions& options = {});

std::vector<double> EstimateEffects(const UpliftModel& model, const Table& rows);

// +1 for rows whose group column equals treated_label, -1 for control_label.
// Throws DataError naming the row for any other value.
std::vector<double> GroupWeightsFromLabels(const Column& group,
                                           const std::string& treated_label,
                                           const std::string& control_label);

}  // namespace cycboost

#endif  // CYCBOOST_UPLIFT_HPP_

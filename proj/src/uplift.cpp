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

#include "cycboost/uplift.hpp"

#include <cmath>
#include <cstdio>

#include "cycboost/error.hpp"

namespace cycboost {

std::vector<double> NormalizeGroupWeights(std::span<const double> weights) {
  double pos = 0.0;
  double neg = 0.0;
  for (const double w : weights) {
    if (w > 0) pos += w;
    if (w < 0) neg -= w;
  }
  const double half = 0.5 * (pos + neg);
  std::vector<double> out(weights.size(), 0.0);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0) out[i] = weights[i] / pos * half;
    if (weights[i] < 0) out[i] = weights[i] / neg * half;
  }
  return out;
}

UpliftModel TrainUplift(const Table& data, std::span<const double> y,
                        std::span<const double> weights, const TrainingConfig& config,
                        const UpliftOptions& options) {
  if (config.mode != Mode::kAdditive) {
    throw ModeError("uplift training requires additive mode, got " +
                    std::string(ToString(config.mode)));
  }
  if (weights.size() != y.size()) {
    throw ShapeError("uplift needs one group weight per row: " +
                     std::to_string(weights.size()) + " weights, " +
                     std::to_string(y.size()) + " rows");
  }
  double sum = 0.0, abs_sum = 0.0;
  bool any_pos = false, any_neg = false;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i])) {
      throw DataError("group weight is not finite at row " + std::to_string(i));
    }
    sum += weights[i];
    abs_sum += std::fabs(weights[i]);
    any_pos = any_pos || weights[i] > 0;
    any_neg = any_neg || weights[i] < 0;
  }
  if (!(abs_sum > 0)) throw DegenerateWeightsError("all group weights are zero");
  if (!any_pos || (!any_neg && options.normalize_groups)) {
    throw ModeError(std::string("uplift needs treated (w > 0) and control (w < 0) rows; only ") +
                    (any_pos ? "treated" : "control") + " rows present");
  }

  UpliftModel out;
  out.imbalance = std::fabs(sum) / abs_sum;
  if (any_neg && out.imbalance > options.imbalance_threshold) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "group weights are imbalanced: |sum w| / sum |w| = %.3g exceeds %.3g",
                  out.imbalance, options.imbalance_threshold);
    out.warnings.emplace_back(buf);
  }

  const std::vector<double> used =
      options.normalize_groups ? NormalizeGroupWeights(weights)
                               : std::vector<double>(weights.begin(), weights.end());
  out.model = detail::TrainImpl(data, y, used, config, {.signed_weights = true}, {});
  return out;
}

std::vector<double> EstimateEffects(const UpliftModel& model, const Table& rows) {
  return Predict(model.model, rows);
}

std::vector<double> GroupWeightsFromLabels(const Column& group,
                                           const std::string& treated_label,
                                           const std::string& control_label) {
  const std::size_t n = ColumnSize(group);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string value = std::holds_alternative<NumericColumn>(group)
                                  ? FormatNumber(std::get<NumericColumn>(group)[i])
                                  : std::get<TextColumn>(group)[i];
    if (value == treated_label) {
      out[i] = 1.0;
    } else if (value == control_label) {
      out[i] = -1.0;
    } else {
      throw DataError("group value '" + value + "' at row " + std::to_string(i) +
                      " is neither '" + treated_label + "' nor '" + control_label + "'");
    }
  }
  return out;
}

}  // namespace cycboost

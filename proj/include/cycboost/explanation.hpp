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

// Per-row factor breakdowns and per-feature training diagnostics.

#ifndef CYCBOOST_EXPLANATION_HPP_
#define CYCBOOST_EXPLANATION_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cycboost/engine.hpp"
#include "cycboost/table.hpp"

namespace cycboost {

struct Contribution {
  std::string feature;
  std::string bin;      // bin label; "a|b" for composed features
  double factor = 1.0;  // response space: factor, or summand in additive mode
  double link_value = 0.0;
};

struct ExplanationRecord {
  double prediction = 0.0;  // yhat, or p in classification
  double mu = 0.0;
  Mode mode = Mode::kMultiplicative;
  std::vector<Contribution> contributions;  // model feature order
};

// Composes mu with the contributions under the record's mode. Bit-identical
// to Predict for the same row.
double Recombine(const ExplanationRecord& record);

// One record per row. Throws SchemaError when a feature column is missing.
std::vector<ExplanationRecord> Explain(const Model& model, const Table& rows);

// Single-line JSON: {prediction, mu, mode, contributions:[{feature, bin,
// factor, link_value}]}.
std::string RecordToJson(const ExplanationRecord& record);

// Text table of the top_n contributions ranked by |link_value|.
std::string RenderTopContributions(const ExplanationRecord& record, std::size_t top_n);

struct DiagnosticBin {
  std::string label;
  std::size_t count = 0;
  double y_sum = 0.0;
  // Bin means relative to the global mean: ratio in the multiplicative and
  // classification modes, difference in additive mode. Empty for count 0.
  std::optional<double> y_norm;
  std::optional<double> yhat_norm;
  double factor_smoothed = 1.0;
};

struct DiagnosticGrid {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  // Row-major, regular bins only; empty cells carry no value.
  std::vector<std::size_t> count;
  std::vector<std::optional<double>> y_norm;
  std::vector<std::optional<double>> yhat_norm;
  std::vector<double> factor;
  // Count-weighted averages of the factor over each row / column.
  std::vector<std::optional<double>> row_marginal;
  std::vector<std::optional<double>> col_marginal;
};

struct FeatureDiagnostics {
  std::string feature;
  Mode mode = Mode::kMultiplicative;
  double y_mean = 0.0;
  double yhat_mean = 0.0;
  std::vector<DiagnosticBin> bins;  // includes the reserved bin last
  std::optional<DiagnosticGrid> grid;  // two-component composed features
};

// Throws SchemaError for an unknown feature, ShapeError when y does not match.
FeatureDiagnostics DiagnoseFeature(const Model& model, const Table& data,
                                   std::span<const double> y, std::string_view feature);

// Columns: bin, count, y_norm, yhat_norm, factor_smoothed. Empty values are
// written as "null".
std::string DiagnosticsCsv(const FeatureDiagnostics& diagnostics);

// Full diagnostics, including the grid, as pretty-printed JSON.
std::string DiagnosticsJson(const FeatureDiagnostics& diagnostics);

}  // namespace cycboost

#endif  // CYCBOOST_EXPLANATION_HPP_

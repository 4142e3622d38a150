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

#include "cycboost/explanation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "cycboost/csv.hpp"
#include "cycboost/error.hpp"

namespace cycboost {

using nlohmann::json;

double Recombine(const ExplanationRecord& record) {
  double value = record.mu;
  if (IsMultiplicative(record.mode)) {
    for (const Contribution& c : record.contributions) value *= c.factor;
  } else {
    for (const Contribution& c : record.contributions) value += c.factor;
  }
  if (record.mode == Mode::kClassification) value = value / (1.0 + value);
  return value;
}

std::vector<ExplanationRecord> Explain(const Model& model, const Table& rows) {
  const auto bins = BinRows(model, rows);
  std::vector<ExplanationRecord> records(rows.num_rows());
  for (std::size_t i = 0; i < records.size(); ++i) {
    ExplanationRecord& r = records[i];
    r.mu = model.mu;
    r.mode = model.mode;
    r.contributions.reserve(model.features.size());
    for (std::size_t j = 0; j < model.features.size(); ++j) {
      const FactorTable& t = model.features[j].table;
      const BinIndex b = bins[j][i];
      r.contributions.push_back({t.feature, t.labels[b], t.response[b], t.link[b]});
    }
    r.prediction = Recombine(r);
  }
  return records;
}

std::string RecordToJson(const ExplanationRecord& record) {
  json contributions = json::array();
  for (const Contribution& c : record.contributions) {
    contributions.push_back(
        {{"feature", c.feature}, {"bin", c.bin}, {"factor", c.factor}, {"link_value", c.link_value}});
  }
  const json out = {{"prediction", record.prediction},
                    {"mu", record.mu},
                    {"mode", std::string(ToString(record.mode))},
                    {"contributions", std::move(contributions)}};
  return out.dump();
}

std::string RenderTopContributions(const ExplanationRecord& record, std::size_t top_n) {
  std::vector<std::size_t> order(record.contributions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(record.contributions[a].link_value) >
           std::fabs(record.contributions[b].link_value);
  });
  order.resize(std::min(top_n, order.size()));

  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "prediction %.6g  (mu %.6g, %s)\n", record.prediction,
                record.mu, std::string(ToString(record.mode)).c_str());
  out << line;
  const char* value_name = IsMultiplicative(record.mode) ? "factor" : "summand";
  std::snprintf(line, sizeof(line), "  %-24s %-24s %12s %12s\n", "feature", "bin", value_name,
                "link");
  out << line;
  for (const std::size_t k : order) {
    const Contribution& c = record.contributions[k];
    std::snprintf(line, sizeof(line), "  %-24s %-24s %12.6g %12.6g\n", c.feature.c_str(),
                  c.bin.c_str(), c.factor, c.link_value);
    out << line;
  }
  return out.str();
}

namespace {

std::optional<double> Normalize(double mean, double global, Mode mode) {
  if (IsMultiplicative(mode)) {
    if (global == 0.0) return std::nullopt;
    return mean / global;
  }
  return mean - global;
}

json Nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string CsvValue(const std::optional<double>& v) {
  return v ? FormatNumber(*v) : std::string("null");
}

}  // namespace

FeatureDiagnostics DiagnoseFeature(const Model& model, const Table& data,
                                   std::span<const double> y, std::string_view feature) {
  const FeatureModel& f = model.Feature(feature);
  if (y.size() != data.num_rows()) {
    throw ShapeError("target has " + std::to_string(y.size()) + " rows, data has " +
                     std::to_string(data.num_rows()));
  }
  if (y.empty()) throw DataError("diagnostics need at least one row");
  const std::vector<double> yhat = Predict(model, data);
  const std::vector<BinIndex> bins = BinFeature(f.binning, f.spec.name, data);

  FeatureDiagnostics d;
  d.feature = f.spec.name;
  d.mode = model.mode;
  const std::size_t nb = f.binning.num_bins();
  std::vector<double> yhat_sum(nb, 0.0);
  d.bins.resize(nb);
  for (std::size_t i = 0; i < y.size(); ++i) {
    DiagnosticBin& b = d.bins[bins[i]];
    ++b.count;
    b.y_sum += y[i];
    yhat_sum[bins[i]] += yhat[i];
    d.y_mean += y[i];
    d.yhat_mean += yhat[i];
  }
  d.y_mean /= static_cast<double>(y.size());
  d.yhat_mean /= static_cast<double>(y.size());
  for (std::size_t k = 0; k < nb; ++k) {
    DiagnosticBin& b = d.bins[k];
    b.label = f.table.labels[k];
    b.factor_smoothed = f.table.response[k];
    if (b.count == 0) continue;
    const double n = static_cast<double>(b.count);
    b.y_norm = Normalize(b.y_sum / n, d.y_mean, model.mode);
    b.yhat_norm = Normalize(yhat_sum[k] / n, d.y_mean, model.mode);
  }

  const auto& parts = f.binning.components();
  if (f.binning.kind() == FeatureKind::kComposed && parts.size() == 2) {
    DiagnosticGrid g;
    const std::size_t rows = parts[0].num_regular_bins();
    const std::size_t cols = parts[1].num_regular_bins();
    for (std::size_t r = 0; r < rows; ++r) g.row_labels.push_back(parts[0].Label(r));
    for (std::size_t c = 0; c < cols; ++c) g.col_labels.push_back(parts[1].Label(c));
    for (std::size_t k = 0; k < rows * cols; ++k) {
      g.count.push_back(d.bins[k].count);
      g.y_norm.push_back(d.bins[k].y_norm);
      g.yhat_norm.push_back(d.bins[k].yhat_norm);
      g.factor.push_back(d.bins[k].factor_smoothed);
    }
    const auto marginal = [&](bool by_row, std::size_t index) -> std::optional<double> {
      double sum = 0.0;
      std::size_t total = 0;
      const std::size_t length = by_row ? cols : rows;
      for (std::size_t m = 0; m < length; ++m) {
        const std::size_t k = by_row ? index * cols + m : m * cols + index;
        sum += static_cast<double>(g.count[k]) * g.factor[k];
        total += g.count[k];
      }
      if (total == 0) return std::nullopt;
      return sum / static_cast<double>(total);
    };
    for (std::size_t r = 0; r < rows; ++r) g.row_marginal.push_back(marginal(true, r));
    for (std::size_t c = 0; c < cols; ++c) g.col_marginal.push_back(marginal(false, c));
    d.grid = std::move(g);
  }
  return d;
}

std::string DiagnosticsCsv(const FeatureDiagnostics& diagnostics) {
  Table t;
  std::vector<std::string> bin, count, y_norm, yhat_norm, factor;
  for (const DiagnosticBin& b : diagnostics.bins) {
    bin.push_back(b.label);
    count.push_back(std::to_string(b.count));
    y_norm.push_back(CsvValue(b.y_norm));
    yhat_norm.push_back(CsvValue(b.yhat_norm));
    factor.push_back(FormatNumber(b.factor_smoothed));
  }
  t.AddColumn("bin", TextColumn{std::move(bin)});
  t.AddColumn("count", TextColumn{std::move(count)});
  t.AddColumn("y_norm", TextColumn{std::move(y_norm)});
  t.AddColumn("yhat_norm", TextColumn{std::move(yhat_norm)});
  t.AddColumn("factor_smoothed", TextColumn{std::move(factor)});
  std::ostringstream out;
  WriteCsv(out, t);
  return out.str();
}

std::string DiagnosticsJson(const FeatureDiagnostics& diagnostics) {
  json bins = json::array();
  for (const DiagnosticBin& b : diagnostics.bins) {
    bins.push_back({{"bin", b.label},
                    {"count", b.count},
                    {"y_norm", Nullable(b.y_norm)},
                    {"yhat_norm", Nullable(b.yhat_norm)},
                    {"factor_smoothed", b.factor_smoothed}});
  }
  json out = {{"feature", diagnostics.feature},
              {"mode", std::string(ToString(diagnostics.mode))},
              {"y_mean", diagnostics.y_mean},
              {"yhat_mean", diagnostics.yhat_mean},
              {"bins", std::move(bins)}};
  if (diagnostics.grid) {
    const DiagnosticGrid& g = *diagnostics.grid;
    const auto nullable_list = [](const std::vector<std::optional<double>>& v) {
      json a = json::array();
      for (const auto& x : v) a.push_back(Nullable(x));
      return a;
    };
    out["grid"] = {{"row_labels", g.row_labels},
                   {"col_labels", g.col_labels},
                   {"count", g.count},
                   {"y_norm", nullable_list(g.y_norm)},
                   {"yhat_norm", nullable_list(g.yhat_norm)},
                   {"factor", g.factor},
                   {"row_marginal", nullable_list(g.row_marginal)},
                   {"col_marginal", nullable_list(g.col_marginal)}};
  }
  return out.dump(2);
}

}  // namespace cycboost

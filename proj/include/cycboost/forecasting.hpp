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

// Daily store/item demand forecasting: calendar features, a synthetic data
// generator with known multiplicative structure, and a train/holdout
// experiment scored by SMAPE.

#ifndef CYCBOOST_FORECASTING_HPP_
#define CYCBOOST_FORECASTING_HPP_

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cycboost/engine.hpp"
#include "cycboost/table.hpp"

namespace cycboost {

using Date = std::chrono::year_month_day;

// Strict YYYY-MM-DD. Returns nullopt for anything else or an invalid date.
std::optional<Date> ParseDate(std::string_view text);
std::string FormatDate(const Date& date);

struct SalesRecord {
  Date date;
  std::string store;
  std::string item;
  double sales = 0.0;
};

// Needs columns date, store, item, sales. Throws SchemaError for a missing
// column and DataError (with the row) for a bad date or negative sales.
std::vector<SalesRecord> ParseSalesRecords(const Table& table);
std::vector<SalesRecord> ReadSalesCsv(const std::string& path);
Table SalesRecordsToTable(std::span<const SalesRecord> records);

struct CalendarFeatures {
  int td = 0;     // days since 2013-01-01
  int dow = 0;    // Monday = 0 .. Sunday = 6
  int doy = 0;    // 1..366
  int month = 0;  // 1..12
  int wom = 0;    // floor((day - 1) / 7) + 1
};

CalendarFeatures Calendar(const Date& date);

// Columns store, item (text) and td, dow, doy, month, wom (numeric).
Table EngineerFeatures(std::span<const SalesRecord> records);

// store, item, td, dow, doy, month, wom followed by item*dow, item*month,
// store*td, item*td and store*item.
std::vector<FeatureSpec> DefaultForecastFeatures(
    int n_bins_td = 100, int n_bins_doy = 100,
    BinStrategy strategy = BinStrategy::kEquidistant);

// Percentage; terms with y = yhat = 0 count as 0. Throws DomainError when
// empty, ShapeError on a length mismatch.
double Smape(std::span<const double> y, std::span<const double> yhat);

struct SyntheticSpec {
  int stores = 10;
  int items = 50;
  Date start = std::chrono::year{2013} / 1 / 1;
  Date end = std::chrono::year{2017} / 12 / 31;
  std::uint64_t seed = 42;
  double mu = 20.0;
  bool seasonal_factor = true;  // day-of-year cycle
  bool trend_factor = true;     // linear in td
};

struct SyntheticData {
  std::vector<SalesRecord> records;
  std::vector<double> expected;  // Poisson mean of each record
  // Ground truth, each with unit mean over its levels: store, item, dow
  // (7 entries), doy (366 entries) and trend (one per day from start).
  std::map<std::string, std::vector<double>> factors;
};

// Sales ~ Poisson(mu * f_store * f_item * f_dow * f_doy * f_trend), one
// record per store, item and day. Deterministic for a given seed.
SyntheticData GenerateSynthetic(const SyntheticSpec& spec);

struct SplitConfig {
  Date train_end;
  Date test_start;
  Date test_end;

  // Throws SplitError unless train_end < test_start <= test_end.
  void Validate() const;
};

struct ItemSmape {
  std::string item;
  std::size_t n = 0;
  double smape_pct = 0.0;
};

struct ExperimentReport {
  double smape_pct = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  SplitConfig split;
  std::string config_hash;
  std::vector<ItemSmape> per_item;  // in first-appearance order in the test window
  Model model;
  std::vector<double> test_y;
  std::vector<double> test_prediction;
};

// Trains on records dated <= train_end and scores test_start..test_end.
// Throws SplitError when either partition is empty.
ExperimentReport RunExperiment(std::span<const SalesRecord> records,
                               const SplitConfig& split, const TrainingConfig& config);

// JSON {smape_pct, n_test, n_train, split, config_hash}.
std::string ReportJson(const ExperimentReport& report);
// Columns item, n, smape_pct.
std::string PerItemCsv(const ExperimentReport& report);

// FNV-1a 64 of the canonical configuration JSON, as 16 hex digits.
std::string ConfigHash(const TrainingConfig& config);

// Writes report.json, per_item.csv, model.json and diagnostics_item.csv into
// out_dir (created if needed). Throws IoError.
void WriteExperimentOutputs(const ExperimentReport& report,
                            std::span<const SalesRecord> records,
                            const std::string& out_dir);

}  // namespace cycboost

#endif  // CYCBOOST_FORECASTING_HPP_

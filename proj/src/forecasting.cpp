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

#include "cycboost/forecasting.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "cycboost/archive.hpp"
#include "cycboost/csv.hpp"
#include "cycboost/error.hpp"
#include "cycboost/explanation.hpp"
#include "cycboost/kernels.hpp"

namespace cycboost {

using std::chrono::sys_days;

namespace {

constexpr Date kEpoch = std::chrono::year{2013} / 1 / 1;

bool ParseInt(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (const char c : text) {
    if (c < '0' || c > '9') return false;
  }
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::string CellText(const Column& column, std::size_t row) {
  if (const auto* text = std::get_if<TextColumn>(&column)) return (*text)[row];
  return FormatNumber(std::get<NumericColumn>(column)[row]);
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::optional<Date> ParseDate(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  if (!ParseInt(text.substr(0, 4), y) || !ParseInt(text.substr(5, 2), m) ||
      !ParseInt(text.substr(8, 2), d)) {
    return std::nullopt;
  }
  const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string FormatDate(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::vector<SalesRecord> ParseSalesRecords(const Table& table) {
  const Column& dates = table.GetColumn("date");
  const Column& stores = table.GetColumn("store");
  const Column& items = table.GetColumn("item");
  const NumericColumn sales = table.GetNumeric("sales");
  std::vector<SalesRecord> out(table.num_rows());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::string text = CellText(dates, i);
    const auto date = ParseDate(text);
    if (!date) throw DataError("unparseable date '" + text + "' at row " + std::to_string(i));
    if (sys_days(*date) < sys_days(kEpoch)) {
      throw DataError("date " + text + " at row " + std::to_string(i) +
                      " precedes 2013-01-01");
    }
    if (!(sales[i] >= 0.0) || !std::isfinite(sales[i])) {
      throw DataError("sales must be a finite number >= 0 at row " + std::to_string(i));
    }
    out[i] = {*date, CellText(stores, i), CellText(items, i), sales[i]};
  }
  return out;
}

std::vector<SalesRecord> ReadSalesCsv(const std::string& path) {
  return ParseSalesRecords(ReadCsvFile(path));
}

Table SalesRecordsToTable(std::span<const SalesRecord> records) {
  TextColumn date, store, item;
  NumericColumn sales;
  for (const SalesRecord& r : records) {
    date.push_back(FormatDate(r.date));
    store.push_back(r.store);
    item.push_back(r.item);
    sales.push_back(r.sales);
  }
  Table t;
  t.AddColumn("date", std::move(date));
  t.AddColumn("store", std::move(store));
  t.AddColumn("item", std::move(item));
  t.AddColumn("sales", std::move(sales));
  return t;
}

CalendarFeatures Calendar(const Date& date) {
  const sys_days day(date);
  CalendarFeatures c;
  c.td = (day - sys_days(kEpoch)).count();
  c.dow = static_cast<int>(std::chrono::weekday(day).iso_encoding()) - 1;
  c.doy = (day - sys_days(date.year() / 1 / 1)).count() + 1;
  c.month = static_cast<int>(static_cast<unsigned>(date.month()));
  c.wom = (static_cast<int>(static_cast<unsigned>(date.day())) - 1) / 7 + 1;
  return c;
}

Table EngineerFeatures(std::span<const SalesRecord> records) {
  TextColumn store, item;
  NumericColumn td, dow, doy, month, wom;
  for (const SalesRecord& r : records) {
    const CalendarFeatures c = Calendar(r.date);
    store.push_back(r.store);
    item.push_back(r.item);
    td.push_back(c.td);
    dow.push_back(c.dow);
    doy.push_back(c.doy);
    month.push_back(c.month);
    wom.push_back(c.wom);
  }
  Table t;
  t.AddColumn("store", std::move(store));
  t.AddColumn("item", std::move(item));
  t.AddColumn("td", std::move(td));
  t.AddColumn("dow", std::move(dow));
  t.AddColumn("doy", std::move(doy));
  t.AddColumn("month", std::move(month));
  t.AddColumn("wom", std::move(wom));
  return t;
}

std::vector<FeatureSpec> DefaultForecastFeatures(int n_bins_td, int n_bins_doy,
                                                 BinStrategy strategy) {
  return {
      FeatureSpec::Categorical("store"),
      FeatureSpec::Categorical("item"),
      FeatureSpec::Continuous("td", n_bins_td, strategy),
      FeatureSpec::Categorical("dow"),
      FeatureSpec::Continuous("doy", n_bins_doy, strategy),
      FeatureSpec::Categorical("month"),
      FeatureSpec::Categorical("wom"),
      FeatureSpec::Composed({"item", "dow"}),
      FeatureSpec::Composed({"item", "month"}),
      FeatureSpec::Composed({"store", "td"}),
      FeatureSpec::Composed({"item", "td"}),
      FeatureSpec::Composed({"store", "item"}),
  };
}

double Smape(std::span<const double> y, std::span<const double> yhat) {
  if (y.empty()) throw DomainError("SMAPE of an empty sample");
  if (y.size() != yhat.size()) throw ShapeError("SMAPE inputs differ in length");
  return 100.0 * kernels::Active().smape_sum(y, yhat) / static_cast<double>(y.size());
}

SyntheticData GenerateSynthetic(const SyntheticSpec& spec) {
  if (spec.stores < 1 || spec.items < 1 || !spec.start.ok() || !spec.end.ok() ||
      sys_days(spec.end) < sys_days(spec.start) || !(spec.mu > 0)) {
    throw DomainError("invalid synthetic data specification");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> spread(-0.6, 0.6);
  const auto unit_mean = [](std::vector<double> v) {
    double mean = 0.0;
    for (const double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double& x : v) x /= mean;
    return v;
  };
  const auto random_table = [&](std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = std::exp(spread(rng));
    return unit_mean(std::move(v));
  };

  SyntheticData out;
  auto& f = out.factors;
  f["store"] = random_table(spec.stores);
  f["item"] = random_table(spec.items);
  f["dow"] = random_table(7);
  const int days = (sys_days(spec.end) - sys_days(spec.start)).count() + 1;
  std::vector<double> doy(366, 1.0);
  if (spec.seasonal_factor) {
    for (int d = 0; d < 366; ++d) {
      doy[d] = 1.0 + 0.3 * std::sin(2.0 * std::numbers::pi * (d - 91.0) / 366.0);
    }
    doy = unit_mean(std::move(doy));
  }
  f["doy"] = doy;
  std::vector<double> trend(days, 1.0);
  if (spec.trend_factor && days > 1) {
    for (int d = 0; d < days; ++d) trend[d] = 1.0 + 0.4 * (d / (days - 1.0) - 0.5);
    trend = unit_mean(std::move(trend));
  }
  f["trend"] = trend;

  const std::size_t n = static_cast<std::size_t>(days) * spec.stores * spec.items;
  out.records.reserve(n);
  out.expected.reserve(n);
  for (int d = 0; d < days; ++d) {
    const Date date{sys_days(spec.start) + std::chrono::days{d}};
    const CalendarFeatures c = Calendar(date);
    const double day_factor = f["dow"][c.dow] * doy[c.doy - 1] * trend[d];
    for (int s = 0; s < spec.stores; ++s) {
      for (int i = 0; i < spec.items; ++i) {
        const double mean = spec.mu * f["store"][s] * f["item"][i] * day_factor;
        std::poisson_distribution<long> poisson(mean);
        out.records.push_back({date, std::to_string(s + 1), std::to_string(i + 1),
                               static_cast<double>(poisson(rng))});
        out.expected.push_back(mean);
      }
    }
  }
  return out;
}

void SplitConfig::Validate() const {
  if (!train_end.ok() || !test_start.ok() || !test_end.ok()) {
    throw SplitError("split dates must be valid calendar dates");
  }
  if (!(sys_days(train_end) < sys_days(test_start)) ||
      sys_days(test_end) < sys_days(test_start)) {
    throw SplitError("split needs train_end < test_start <= test_end, got " +
                     FormatDate(train_end) + ", " + FormatDate(test_start) + ", " +
                     FormatDate(test_end));
  }
}

ExperimentReport RunExperiment(std::span<const SalesRecord> records,
                               const SplitConfig& split, const TrainingConfig& config) {
  split.Validate();
  std::vector<SalesRecord> train, test;
  for (const SalesRecord& r : records) {
    const sys_days day(r.date);
    if (day <= sys_days(split.train_end)) {
      train.push_back(r);
    } else if (day >= sys_days(split.test_start) && day <= sys_days(split.test_end)) {
      test.push_back(r);
    }
  }
  if (train.empty()) throw SplitError("no records on or before " + FormatDate(split.train_end));
  if (test.empty()) {
    throw SplitError("no records between " + FormatDate(split.test_start) + " and " +
                     FormatDate(split.test_end));
  }

  ExperimentReport report;
  report.split = split;
  report.n_train = train.size();
  report.n_test = test.size();
  report.config_hash = ConfigHash(config);

  std::vector<double> y_train;
  y_train.reserve(train.size());
  for (const SalesRecord& r : train) y_train.push_back(r.sales);
  report.model = Train(EngineerFeatures(train), y_train, {}, config);

  for (const SalesRecord& r : test) report.test_y.push_back(r.sales);
  report.test_prediction = Predict(report.model, EngineerFeatures(test));
  report.smape_pct = Smape(report.test_y, report.test_prediction);

  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<std::size_t>> rows;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto [it, inserted] = index.try_emplace(test[i].item, rows.size());
    if (inserted) {
      rows.emplace_back();
      report.per_item.push_back({test[i].item, 0, 0.0});
    }
    rows[it->second].push_back(i);
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::vector<double> y, p;
    for (const std::size_t i : rows[k]) {
      y.push_back(report.test_y[i]);
      p.push_back(report.test_prediction[i]);
    }
    report.per_item[k].n = y.size();
    report.per_item[k].smape_pct = Smape(y, p);
  }
  return report;
}

std::string ReportJson(const ExperimentReport& report) {
  const nlohmann::json out = {
      {"smape_pct", report.smape_pct},
      {"n_test", report.n_test},
      {"n_train", report.n_train},
      {"split",
       {{"train_end", FormatDate(report.split.train_end)},
        {"test_start", FormatDate(report.split.test_start)},
        {"test_end", FormatDate(report.split.test_end)}}},
      {"config_hash", report.config_hash}};
  return out.dump(2);
}

std::string PerItemCsv(const ExperimentReport& report) {
  TextColumn item;
  NumericColumn n, smape;
  for (const ItemSmape& s : report.per_item) {
    item.push_back(s.item);
    n.push_back(static_cast<double>(s.n));
    smape.push_back(s.smape_pct);
  }
  Table t;
  t.AddColumn("item", std::move(item));
  t.AddColumn("n", std::move(n));
  t.AddColumn("smape_pct", std::move(smape));
  std::ostringstream out;
  WriteCsv(out, t);
  return out.str();
}

std::string ConfigHash(const TrainingConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : ConfigToJson(config)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void WriteExperimentOutputs(const ExperimentReport& report,
                            std::span<const SalesRecord> records,
                            const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory '" + out_dir + "': " + ec.message());
  const fs::path dir(out_dir);
  WriteText(dir / "report.json", ReportJson(report) + "\n");
  WriteText(dir / "per_item.csv", PerItemCsv(report));
  SaveModel(report.model, (dir / "model.json").string());

  bool has_item = false;
  for (const FeatureModel& f : report.model.features) has_item = has_item || f.spec.name == "item";
  if (!has_item) return;
  std::vector<SalesRecord> train;
  std::vector<double> y;
  for (const SalesRecord& r : records) {
    if (sys_days(r.date) <= sys_days(report.split.train_end)) {
      train.push_back(r);
      y.push_back(r.sales);
    }
  }
  const FeatureDiagnostics d =
      DiagnoseFeature(report.model, EngineerFeatures(train), y, "item");
  WriteText(dir / "diagnostics_item.csv", DiagnosticsCsv(d));
}

}  // namespace cycboost

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

#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cycboost/archive.hpp"
#include "cycboost/csv.hpp"
#include "cycboost/engine.hpp"
#include "cycboost/explanation.hpp"
#include "cycboost/forecasting.hpp"
#include "cycboost/uplift.hpp"

namespace cycboost::cli {

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchema:
    case ErrorCode::kShape:
      return 2;
    case ErrorCode::kIo:
    case ErrorCode::kFormat:
      return 4;
    default:
      return 3;
  }
}

namespace {

struct TrainFlags {
  std::string features;
  int cycles = 10;
  double lr0 = 0.1;
  std::string lr_shape = "linear";
  std::string estimator = "mean";
  std::string stop_metric = "MAD";
  double stop_tol = 1e-4;
  bool no_smoothing = false;
  int max_degree = 3;
  std::string two_dim;
  int svd_rank = 2;
  bool no_boost_weights = false;
  std::uint64_t seed = 0;  // training is deterministic; accepted for uniformity
};

void AddTrainFlags(CLI::App* cmd, TrainFlags& f, bool need_features) {
  auto* features = cmd->add_option(
      "--features", f.features,
      "Comma-separated feature specs (name:kind[:n_bins[:strategy]], a*b) or a file "
      "with one spec per line");
  if (need_features) features->required();
  cmd->add_option("--cycles", f.cycles, "Maximum number of cycles")->capture_default_str();
  cmd->add_option("--lr0", f.lr0, "Learning rate of the first cycle")->capture_default_str();
  cmd->add_option("--lr-shape", f.lr_shape, "linear or logistic")->capture_default_str();
  cmd->add_option("--estimator", f.estimator, "mean or median")->capture_default_str();
  cmd->add_option("--stop-metric", f.stop_metric, "MAD or MSE")->capture_default_str();
  cmd->add_option("--stop-tol", f.stop_tol, "Relative improvement threshold")
      ->capture_default_str();
  cmd->add_flag("--no-smoothing", f.no_smoothing, "Disable all smoothing");
  cmd->add_option("--max-degree", f.max_degree, "Polynomial smoother degree cap")
      ->capture_default_str();
  cmd->add_option("--two-dim", f.two_dim, "groupby or truncated_svd for 2D features");
  cmd->add_option("--svd-rank", f.svd_rank, "Rank kept by the SVD smoother")
      ->capture_default_str();
  cmd->add_flag("--no-boost-weights", f.no_boost_weights,
                "Classification: disable misclassification boosting weights");
  cmd->add_option("--seed", f.seed, "Seed (training itself is deterministic)");
}

std::vector<FeatureSpec> ParseFeatureList(const std::string& text) {
  std::vector<std::string> items;
  std::error_code ec;
  if (!text.empty() && std::filesystem::is_regular_file(text, ec)) {
    std::ifstream in(text);
    if (!in) throw IoError("cannot open feature file '" + text + "'");
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const auto last = line.find_last_not_of(" \t\r");
      items.push_back(line.substr(first, last - first + 1));
    }
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) items.push_back(item);
    }
  }
  if (items.empty()) throw SchemaError("no features given");
  std::vector<FeatureSpec> specs;
  for (const std::string& item : items) specs.push_back(ParseFeatureSpec(item));
  return specs;
}

TrainingConfig BuildConfig(const TrainFlags& f, Mode mode) {
  TrainingConfig c;
  c.mode = mode;
  if (!f.features.empty()) c.features = ParseFeatureList(f.features);
  c.max_cycles = f.cycles;
  c.learning_rate_start = f.lr0;
  c.learning_rate_shape = ParseLearningRateShape(f.lr_shape);
  c.priors.estimator = ParseEstimator(f.estimator);
  c.stop_metric = ParseStopMetric(f.stop_metric);
  c.stop_rel_tol = f.stop_tol;
  c.smoothing.max_degree = f.max_degree;
  c.smoothing.svd_rank = f.svd_rank;
  if (!f.two_dim.empty()) c.smoothing.two_dim_method = ParseTwoDimSmoother(f.two_dim);
  if (f.no_smoothing) c.smoothing = SmootherConfig::Disabled();
  c.boost_classification_weights = !f.no_boost_weights;
  return c;
}

void PrintHistory(const Model& model, std::ostream& out) {
  const TrainingHistory& h = model.history;
  char line[128];
  std::snprintf(line, sizeof(line), "%6s %10s %16s\n", "cycle", "eta", "metric");
  out << line;
  for (std::size_t t = 0; t < h.metric.size(); ++t) {
    if (t == 0) {
      std::snprintf(line, sizeof(line), "%6zu %10s %16.8g\n", t, "-", h.metric[t]);
    } else {
      std::snprintf(line, sizeof(line), "%6zu %10.4f %16.8g%s\n", t, h.eta[t - 1], h.metric[t],
                    static_cast<int>(t) == h.best_cycle ? "  *" : "");
    }
    out << line;
  }
  out << "best cycle " << h.best_cycle << ", " << ToString(model.config.stop_metric) << ' '
      << FormatNumber(h.metric[h.best_cycle]) << ", mu " << FormatNumber(model.mu) << '\n';
}

// Writes to the file or, for an empty path, to out.
void Emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << text;
  if (!file) throw IoError("failed writing '" + path + "'");
}

std::string PredictionCsv(const std::vector<double>& values, const std::string& name) {
  Table t;
  t.AddColumn(name, NumericColumn(values));
  std::ostringstream s;
  WriteCsv(s, t);
  return s.str();
}

Date RequireDate(const std::string& text, const std::string& flag) {
  const auto d = ParseDate(text);
  if (!d) throw SchemaError(flag + " expects YYYY-MM-DD, got '" + text + "'");
  return *d;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cyclic coordinate-descent boosting for explainable generalized additive models",
               "cycboost"};
  app.require_subcommand(1);
  std::function<void()> action;

  // train
  TrainFlags train_flags;
  std::string train_data, train_target, train_mode = "multiplicative", train_weights, train_out;
  auto* train = app.add_subcommand("train", "Train a model and write its archive");
  train->add_option("--data", train_data, "Training CSV")->required();
  train->add_option("--target", train_target, "Target column")->required();
  train->add_option("--mode", train_mode, "multiplicative, additive or classification")
      ->capture_default_str();
  train->add_option("--weights", train_weights, "Nonnegative sample-weight column");
  train->add_option("--out", train_out, "Model archive path")->required();
  AddTrainFlags(train, train_flags, true);
  train->callback([&] {
    action = [&] {
      const TrainingConfig config = BuildConfig(train_flags, ParseMode(train_mode));
      const Table data = ReadCsvFile(train_data);
      const NumericColumn y = data.GetNumeric(train_target);
      NumericColumn w;
      if (!train_weights.empty()) w = data.GetNumeric(train_weights);
      const Model model = Train(data, y, w, config);
      SaveModel(model, train_out);
      PrintHistory(model, out);
    };
  });

  // predict
  std::string predict_model, predict_data, predict_out;
  auto* predict = app.add_subcommand("predict", "Predict rows of a CSV");
  predict->add_option("--model", predict_model, "Model archive")->required();
  predict->add_option("--data", predict_data, "Input CSV")->required();
  predict->add_option("--out", predict_out, "Output CSV (default stdout)");
  predict->callback([&] {
    action = [&] {
      const Model model = LoadModel(predict_model);
      const std::vector<double> p = Predict(model, ReadCsvFile(predict_data));
      Emit(predict_out, PredictionCsv(p, "prediction"), out);
    };
  });

  // explain
  std::string explain_model, explain_data, explain_out;
  std::size_t top_n = 0;
  auto* explain = app.add_subcommand("explain", "Per-row factor breakdowns as JSON lines");
  explain->add_option("--model", explain_model, "Model archive")->required();
  explain->add_option("--data", explain_data, "Input CSV")->required();
  explain->add_option("--out", explain_out, "Output JSONL (default stdout)");
  explain->add_option("--top-n", top_n, "Also print the N strongest contributions per row");
  explain->callback([&] {
    action = [&] {
      const Model model = LoadModel(explain_model);
      const auto records = Explain(model, ReadCsvFile(explain_data));
      std::string jsonl;
      for (const ExplanationRecord& r : records) jsonl += RecordToJson(r) + "\n";
      Emit(explain_out, jsonl, out);
      if (top_n > 0) {
        for (const ExplanationRecord& r : records) out << RenderTopContributions(r, top_n);
      }
    };
  });

  // diagnose
  std::string diag_model, diag_data, diag_target, diag_feature, diag_out, diag_json;
  auto* diagnose = app.add_subcommand("diagnose", "Per-bin diagnostics of one feature");
  diagnose->add_option("--model", diag_model, "Model archive")->required();
  diagnose->add_option("--data", diag_data, "CSV with features and target")->required();
  diagnose->add_option("--target", diag_target, "Target column")->required();
  diagnose->add_option("--feature", diag_feature, "Feature name")->required();
  diagnose->add_option("--out", diag_out, "Output CSV (default stdout)");
  diagnose->add_option("--json", diag_json, "Also write full diagnostics (with 2D grid) as JSON");
  diagnose->callback([&] {
    action = [&] {
      const Model model = LoadModel(diag_model);
      const Table data = ReadCsvFile(diag_data);
      const FeatureDiagnostics d =
          DiagnoseFeature(model, data, data.GetNumeric(diag_target), diag_feature);
      Emit(diag_out, DiagnosticsCsv(d), out);
      if (!diag_json.empty()) Emit(diag_json, DiagnosticsJson(d) + "\n", out);
    };
  });

  // uplift
  TrainFlags uplift_flags;
  std::string uplift_data, uplift_target, uplift_weight_col, uplift_treated, uplift_control,
      uplift_out, uplift_effects;
  bool uplift_raw = false;
  auto* uplift = app.add_subcommand("uplift", "Train a treatment-effect model");
  uplift->add_option("--data", uplift_data, "Training CSV")->required();
  uplift->add_option("--target", uplift_target, "Outcome column")->required();
  uplift->add_option("--weight-col", uplift_weight_col,
                     "Group column: signed weights, or labels with --treated/--control")
      ->required();
  uplift->add_option("--treated", uplift_treated, "Label of treated rows");
  uplift->add_option("--control", uplift_control, "Label of control rows");
  uplift->add_flag("--raw-weights", uplift_raw, "Use raw signed weights (no group normalization)");
  uplift->add_option("--out", uplift_out, "Model archive path")->required();
  uplift->add_option("--effects", uplift_effects, "Write per-row effect estimates to this CSV");
  AddTrainFlags(uplift, uplift_flags, true);
  uplift->callback([&] {
    action = [&] {
      if (uplift_treated.empty() != uplift_control.empty()) {
        throw SchemaError("--treated and --control must be given together");
      }
      const TrainingConfig config = BuildConfig(uplift_flags, Mode::kAdditive);
      const Table data = ReadCsvFile(uplift_data);
      const NumericColumn y = data.GetNumeric(uplift_target);
      const NumericColumn w =
          uplift_treated.empty()
              ? data.GetNumeric(uplift_weight_col)
              : GroupWeightsFromLabels(data.GetColumn(uplift_weight_col), uplift_treated,
                                       uplift_control);
      UpliftOptions options;
      options.normalize_groups = !uplift_raw;
      const UpliftModel model = TrainUplift(data, y, w, config, options);
      for (const std::string& warning : model.warnings) err << "warning: " << warning << '\n';
      SaveModel(model.model, uplift_out);
      PrintHistory(model.model, out);
      out << "average effect " << FormatNumber(model.model.mu) << '\n';
      if (!uplift_effects.empty()) {
        Emit(uplift_effects, PredictionCsv(EstimateEffects(model, data), "effect"), out);
      }
    };
  });

  // experiment
  TrainFlags exp_flags;
  std::string exp_data, exp_out_dir;
  std::string train_end = "2016-12-31", test_start = "2017-01-01", test_end = "2017-03-31";
  int n_bins_td = 100, n_bins_doy = 100;
  std::string bin_strategy = "equidistant";
  auto* experiment = app.add_subcommand("experiment", "Demand-forecasting train/holdout run");
  experiment->add_option("--data", exp_data, "CSV with date,store,item,sales")->required();
  experiment->add_option("--train-end", train_end, "Last training date")->capture_default_str();
  experiment->add_option("--test-start", test_start, "First test date")->capture_default_str();
  experiment->add_option("--test-end", test_end, "Last test date")->capture_default_str();
  experiment->add_option("--n-bins-td", n_bins_td, "Bins of the trend feature")
      ->capture_default_str();
  experiment->add_option("--n-bins-doy", n_bins_doy, "Bins of day of year")
      ->capture_default_str();
  experiment->add_option("--bin-strategy", bin_strategy, "equidistant or quantile")
      ->capture_default_str();
  experiment->add_option("--out-dir", exp_out_dir,
                         "Write report.json, per_item.csv, model.json, diagnostics_item.csv");
  AddTrainFlags(experiment, exp_flags, false);
  experiment->callback([&] {
    action = [&] {
      TrainingConfig config = BuildConfig(exp_flags, Mode::kMultiplicative);
      if (config.features.empty()) {
        config.features =
            DefaultForecastFeatures(n_bins_td, n_bins_doy, ParseBinStrategy(bin_strategy));
      }
      const SplitConfig split{RequireDate(train_end, "--train-end"),
                              RequireDate(test_start, "--test-start"),
                              RequireDate(test_end, "--test-end")};
      const std::vector<SalesRecord> records = ReadSalesCsv(exp_data);
      const ExperimentReport report = RunExperiment(records, split, config);
      if (!exp_out_dir.empty()) WriteExperimentOutputs(report, records, exp_out_dir);
      out << ReportJson(report) << '\n';
    };
  });

  // generate
  SyntheticSpec gen;
  std::string gen_out, gen_truth, gen_start = "2013-01-01", gen_end = "2017-12-31";
  bool no_seasonal = false, no_trend = false;
  auto* generate = app.add_subcommand("generate", "Write synthetic store-item sales data");
  generate->add_option("--out", gen_out, "Output CSV")->required();
  generate->add_option("--stores", gen.stores)->capture_default_str();
  generate->add_option("--items", gen.items)->capture_default_str();
  generate->add_option("--start", gen_start)->capture_default_str();
  generate->add_option("--end", gen_end)->capture_default_str();
  generate->add_option("--mu", gen.mu)->capture_default_str();
  generate->add_option("--seed", gen.seed)->capture_default_str();
  generate->add_flag("--no-seasonal", no_seasonal, "Flat day-of-year factor");
  generate->add_flag("--no-trend", no_trend, "Flat trend factor");
  generate->add_option("--truth", gen_truth, "Write the ground-truth factor tables as JSON");
  generate->callback([&] {
    action = [&] {
      gen.start = RequireDate(gen_start, "--start");
      gen.end = RequireDate(gen_end, "--end");
      gen.seasonal_factor = !no_seasonal;
      gen.trend_factor = !no_trend;
      const SyntheticData data = GenerateSynthetic(gen);
      WriteCsvFile(gen_out, SalesRecordsToTable(data.records));
      if (!gen_truth.empty()) Emit(gen_truth, nlohmann::json(data.factors).dump(1) + "\n", out);
      out << "wrote " << data.records.size() << " records to " << gen_out << '\n';
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    if (action) action();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace cycboost::cli

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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"
#include "cycboost/archive.hpp"
#include "cycboost/csv.hpp"
#include "cycboost/engine.hpp"
#include "test_util.hpp"

namespace cycboost::cli {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cycboost_cli_" + std::string(::testing::UnitTest::GetInstance()
                                              ->current_test_info()
                                              ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    auto d = testing::MixedData(2000, 61, Mode::kMultiplicative);
    d.data.AddColumn("y", NumericColumn(d.y));
    WriteCsvFile(Path("train.csv"), d.data);
    WriteCsvFile(Path("rows.csv"), testing::RandomRows(50, 62));
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  int Run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return RunCli(args, out_, err_);
  }

  int TrainModel(const std::string& mode = "multiplicative") {
    return Run({"train", "--data", Path("train.csv"), "--target", "y", "--mode", mode,
                "--features", "c:cat,x:cont:10,z:cat,c*x", "--cycles", "4", "--out",
                Path("model.json")});
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, TrainThenPredictMatchesLibrary) {
  ASSERT_EQ(TrainModel(), 0) << err_.str();
  ASSERT_EQ(Run({"predict", "--model", Path("model.json"), "--data", Path("rows.csv"), "--out",
                 Path("pred.csv")}),
            0)
      << err_.str();
  const Table pred = ReadCsvFile(Path("pred.csv"));
  const std::vector<double> expected =
      Predict(LoadModel(Path("model.json")), ReadCsvFile(Path("rows.csv")));
  EXPECT_EQ(pred.GetNumeric("prediction"), expected);
}

TEST_F(Cli, ExplainAgreesWithPredict) {
  ASSERT_EQ(TrainModel(), 0) << err_.str();
  ASSERT_EQ(Run({"predict", "--model", Path("model.json"), "--data", Path("rows.csv"), "--out",
                 Path("pred.csv")}),
            0);
  ASSERT_EQ(Run({"explain", "--model", Path("model.json"), "--data", Path("rows.csv"),
                 "--top-n", "2"}),
            0)
      << err_.str();
  const NumericColumn pred = ReadCsvFile(Path("pred.csv")).GetNumeric("prediction");
  std::istringstream lines(out_.str());
  std::string line;
  std::size_t row = 0;
  while (row < pred.size() && std::getline(lines, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("prediction").get<double>(), pred[row]);
    EXPECT_EQ(j.at("contributions").size(), 4u);
    ++row;
  }
  EXPECT_EQ(row, pred.size());
  EXPECT_NE(out_.str().find("prediction "), std::string::npos);  // top-n text follows
}

TEST_F(Cli, DiagnoseWritesColumns) {
  ASSERT_EQ(TrainModel(), 0);
  ASSERT_EQ(Run({"diagnose", "--model", Path("model.json"), "--data", Path("train.csv"),
                 "--target", "y", "--feature", "c*x", "--out", Path("diag.csv"), "--json",
                 Path("diag.json")}),
            0)
      << err_.str();
  const Table t = ReadCsvFile(Path("diag.csv"));
  EXPECT_EQ(t.names(), (std::vector<std::string>{"bin", "count", "y_norm", "yhat_norm",
                                                 "factor_smoothed"}));
  EXPECT_EQ(t.num_rows(), 6u * 10u + 1u);
  std::ifstream in(Path("diag.json"));
  const auto j = nlohmann::json::parse(in);
  EXPECT_TRUE(j.contains("grid"));
}

TEST_F(Cli, ExitCodes) {
  // classification target outside {0, 1}
  EXPECT_EQ(TrainModel("classification"), 3);
  EXPECT_NE(err_.str().find("classification"), std::string::npos);
  // missing input file
  EXPECT_EQ(Run({"predict", "--model", Path("absent.json"), "--data", Path("rows.csv")}), 4);
  // malformed archive
  std::ofstream(Path("bad.json")) << "{oops";
  EXPECT_EQ(Run({"predict", "--model", Path("bad.json"), "--data", Path("rows.csv")}), 4);
  // usage errors
  EXPECT_EQ(Run({"train", "--data", Path("train.csv")}), 2);
  EXPECT_EQ(Run({"bogus"}), 2);
  EXPECT_EQ(Run({"--help"}), 0);
  // unknown feature column
  EXPECT_EQ(Run({"train", "--data", Path("train.csv"), "--target", "y", "--features",
                 "nope:cat", "--out", Path("m.json")}),
            2);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kSplit), 3);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kFormat), 4);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kShape), 2);
}

TEST_F(Cli, GenerateAndExperiment) {
  ASSERT_EQ(Run({"generate", "--out", Path("sales.csv"), "--stores", "2", "--items", "3",
                 "--start", "2013-01-01", "--end", "2013-06-30", "--truth", Path("truth.json")}),
            0)
      << err_.str();
  EXPECT_TRUE(fs::exists(Path("truth.json")));
  ASSERT_EQ(Run({"experiment", "--data", Path("sales.csv"), "--train-end", "2013-05-31",
                 "--test-start", "2013-06-01", "--test-end", "2013-06-30", "--cycles", "3",
                 "--n-bins-td", "20", "--n-bins-doy", "20", "--out-dir", Path("exp")}),
            0)
      << err_.str();
  const auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j.at("n_test").get<int>(), 2 * 3 * 30);
  EXPECT_TRUE(fs::exists(Path("exp/per_item.csv")));
  EXPECT_EQ(Run({"experiment", "--data", Path("sales.csv"), "--train-end", "2013-06-30",
                 "--test-start", "2013-06-01", "--test-end", "2013-06-30"}),
            3);
}

TEST_F(Cli, UpliftFromGroupLabels) {
  auto d = testing::MixedData(2000, 63, Mode::kAdditive);
  TextColumn group(d.y.size());
  for (std::size_t i = 0; i < group.size(); ++i) {
    group[i] = i % 2 ? "treated" : "control";
    if (i % 2) d.y[i] += 1.0;
  }
  d.data.AddColumn("y", NumericColumn(d.y));
  d.data.AddColumn("group", std::move(group));
  WriteCsvFile(Path("trial.csv"), d.data);
  ASSERT_EQ(Run({"uplift", "--data", Path("trial.csv"), "--target", "y", "--weight-col", "group",
                 "--treated", "treated", "--control", "control", "--features", "c:cat,x:cont:5",
                 "--out", Path("uplift.json"), "--effects", Path("effects.csv")}),
            0)
      << err_.str();
  const NumericColumn effects = ReadCsvFile(Path("effects.csv")).GetNumeric("effect");
  ASSERT_EQ(effects.size(), d.y.size());
  double mean = 0.0;
  for (const double e : effects) mean += e;
  EXPECT_NEAR(mean / static_cast<double>(effects.size()), 1.0, 0.15);
  // The same file without a control label: every row must be labelled.
  EXPECT_EQ(Run({"uplift", "--data", Path("trial.csv"), "--target", "y", "--weight-col",
                 "group", "--treated", "treated", "--control", "ctl", "--features", "c:cat",
                 "--out", Path("u2.json")}),
            3);
}

}  // namespace
}  // namespace cycboost::cli

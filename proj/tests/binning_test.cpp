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

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cycboost/binning.hpp"
#include "cycboost/csv.hpp"
#include "cycboost/error.hpp"
#include "cycboost/table.hpp"

namespace cycboost {
namespace {

TEST(FeatureSpecs, ParseAndFormatRoundTrip) {
  const FeatureSpec cont = ParseFeatureSpec("td:cont:40:quantile");
  EXPECT_EQ(cont.name, "td");
  EXPECT_EQ(cont.kind, FeatureKind::kContinuous);
  EXPECT_EQ(cont.n_bins, 40);
  EXPECT_EQ(cont.strategy, BinStrategy::kQuantile);
  EXPECT_EQ(ParseFeatureSpec(FormatFeatureSpec(cont)), cont);

  const FeatureSpec cat = ParseFeatureSpec("store:cat");
  EXPECT_EQ(cat.kind, FeatureKind::kCategorical);
  const FeatureSpec comp = ParseFeatureSpec("item*dow");
  EXPECT_EQ(comp.kind, FeatureKind::kComposed);
  EXPECT_EQ(comp.components, (std::vector<std::string>{"item", "dow"}));
  EXPECT_EQ(comp.name, "item*dow");

  EXPECT_THROW(ParseFeatureSpec("x"), SchemaError);
  EXPECT_THROW(ParseFeatureSpec("x:bogus"), SchemaError);
  EXPECT_THROW(ParseFeatureSpec("x:cont:0"), SchemaError);
  EXPECT_THROW(ParseFeatureSpec("x:cont:2.5"), SchemaError);
}

TEST(FeatureSpecs, Validation) {
  EXPECT_THROW(ValidateFeatureSpecs({}), SchemaError);
  EXPECT_THROW(ValidateFeatureSpecs({FeatureSpec::Categorical("a"),
                                     FeatureSpec::Categorical("a")}),
               SchemaError);
  EXPECT_THROW(ValidateFeatureSpecs({FeatureSpec::Categorical("a"),
                                     FeatureSpec::Composed({"a", "b"})}),
               SchemaError);
  EXPECT_NO_THROW(ValidateFeatureSpecs({FeatureSpec::Categorical("a"),
                                        FeatureSpec::Continuous("b", 5),
                                        FeatureSpec::Composed({"a", "b"})}));
}

TEST(Binning, CategoricalLevelsAndReserved) {
  const Column col = TextColumn{"b", "a", "b", "", "c"};
  const BinDefinition d = FitBinning(col, FeatureSpec::Categorical("f"));
  EXPECT_EQ(d.num_regular_bins(), 3u);  // first-appearance order: b, a, c
  EXPECT_EQ(d.Label(0), "b");
  EXPECT_EQ(d.BinOf(std::string_view("a")), 1u);
  EXPECT_EQ(d.BinOf(std::string_view("zzz")), d.reserved_index());
  EXPECT_EQ(d.BinOf(std::string_view("")), d.reserved_index());
  const auto bins = ApplyBinning(d, col);
  EXPECT_EQ(bins, (std::vector<BinIndex>{0, 1, 0, 3, 2}));
}

TEST(Binning, NumericCategoricalUsesShortestLabels) {
  const Column col = NumericColumn{0, 1, 2, 1, std::nan("")};
  const BinDefinition d = FitBinning(col, FeatureSpec::Categorical("dow"));
  EXPECT_EQ(d.num_regular_bins(), 3u);
  EXPECT_EQ(d.Label(1), "1");
  EXPECT_EQ(d.BinOf(1.0), 1u);
  EXPECT_EQ(d.BinOf(std::string_view("2")), 2u);
  EXPECT_EQ(d.BinOf(std::nan("")), d.reserved_index());
}

TEST(Binning, EquidistantEdgesAndClamping) {
  const Column col = NumericColumn{0.0, 10.0, 3.0, 7.5};
  const BinDefinition d = FitBinning(col, FeatureSpec::Continuous("x", 4));
  EXPECT_EQ(d.edges(), (std::vector<double>{0, 2.5, 5, 7.5, 10}));
  EXPECT_EQ(d.BinOf(0.0), 0u);
  EXPECT_EQ(d.BinOf(2.5), 1u);   // left-closed
  EXPECT_EQ(d.BinOf(7.5), 3u);
  EXPECT_EQ(d.BinOf(10.0), 3u);  // last bin is closed
  EXPECT_EQ(d.BinOf(-4.0), 0u);
  EXPECT_EQ(d.BinOf(99.0), 3u);
  EXPECT_EQ(d.BinOf(std::nan("")), d.reserved_index());
  EXPECT_EQ(d.BinOf(std::string_view("NA")), d.reserved_index());
  EXPECT_DOUBLE_EQ(d.Center(1), 3.75);
  EXPECT_EQ(d.Label(0), "[0, 2.5)");
  EXPECT_EQ(d.Label(3), "[7.5, 10]");
}

TEST(Binning, QuantileBinsHoldEqualCounts) {
  NumericColumn values;
  for (int i = 0; i < 100; ++i) values.push_back(i * i * 0.01);
  const BinDefinition d =
      FitBinning(values, FeatureSpec::Continuous("x", 4, BinStrategy::kQuantile));
  ASSERT_EQ(d.num_regular_bins(), 4u);
  std::vector<int> counts(d.num_bins(), 0);
  for (const BinIndex b : ApplyBinning(d, values)) ++counts[b];
  EXPECT_EQ(counts, (std::vector<int>{25, 25, 25, 25, 0}));
}

TEST(Binning, QuantileMergesRepeatedEdges) {
  const NumericColumn values = {1, 1, 1, 1, 1, 1, 2, 3};
  const BinDefinition d =
      FitBinning(values, FeatureSpec::Continuous("x", 4, BinStrategy::kQuantile));
  EXPECT_EQ(d.edges(), (std::vector<double>{1, 2, 3}));
}

TEST(Binning, ConstantColumnGivesOneBin) {
  const BinDefinition d = FitBinning(NumericColumn{4, 4, 4}, FeatureSpec::Continuous("x", 10));
  EXPECT_EQ(d.num_regular_bins(), 1u);
  EXPECT_EQ(d.BinOf(-100.0), 0u);
  EXPECT_EQ(d.BinOf(100.0), 0u);
}

TEST(Binning, FitErrors) {
  EXPECT_THROW(FitBinning(NumericColumn{}, FeatureSpec::Continuous("x")), FitError);
  EXPECT_THROW(FitBinning(NumericColumn{std::nan(""), std::nan("")},
                          FeatureSpec::Continuous("x")),
               FitError);
  EXPECT_THROW(FitBinning(TextColumn{"", "NA"}, FeatureSpec::Categorical("c")), FitError);
  EXPECT_THROW(BinDefinition::Continuous({1.0}), FitError);
  EXPECT_THROW(BinDefinition::Continuous({2.0, 1.0}), FitError);
}

TEST(Binning, ComposeRowMajorWithReserved) {
  const std::vector<std::vector<BinIndex>> parts = {{0, 1, 2, 1, 3}, {0, 1, 1, 4, 0}};
  const std::vector<std::size_t> counts = {3, 4};
  const auto bins = ComposeBins(parts, counts);
  EXPECT_EQ(bins, (std::vector<BinIndex>{0, 5, 9, 12, 12}));

  const BinDefinition a = BinDefinition::Categorical({"p", "q", "r"});
  const BinDefinition b = BinDefinition::Continuous({0, 1, 2, 3, 4});
  const BinDefinition c = BinDefinition::Composed({"a", "b"}, {a, b});
  EXPECT_EQ(c.num_regular_bins(), 12u);
  EXPECT_EQ(c.Decompose(9), (std::vector<BinIndex>{2, 1}));
  EXPECT_EQ(c.Decompose(12), (std::vector<BinIndex>{3, 4}));
  EXPECT_EQ(c.Label(9), "r|[1, 2)");
  EXPECT_THROW(ComposeBins(std::vector<std::vector<BinIndex>>{{0}, {0, 1}}, counts),
               ShapeError);
}

TEST(Binning, BinFeatureReadsComponentColumns) {
  Table t;
  t.AddColumn("a", TextColumn{"p", "q", "zz"});
  t.AddColumn("b", NumericColumn{0.5, 3.5, 1.0});
  const BinDefinition a = BinDefinition::Categorical({"p", "q"});
  const BinDefinition b = BinDefinition::Continuous({0, 2, 4});
  const BinDefinition c = BinDefinition::Composed({"a", "b"}, {a, b});
  EXPECT_EQ(BinFeature(c, "a*b", t), (std::vector<BinIndex>{0, 3, 4}));
  EXPECT_THROW(BinFeature(a, "missing", t), SchemaError);
}

TEST(Table, NumbersAndMissingMarkers) {
  EXPECT_EQ(ParseNumber("2.5"), 2.5);
  EXPECT_FALSE(ParseNumber("2.5x").has_value());
  EXPECT_FALSE(ParseNumber("").has_value());
  EXPECT_TRUE(IsMissingText(""));
  EXPECT_TRUE(IsMissingText("NA"));
  EXPECT_FALSE(IsMissingText("a"));
  EXPECT_EQ(FormatNumber(0.1), "0.1");
  EXPECT_EQ(FormatNumber(3.0), "3");
  EXPECT_EQ(*ParseNumber(FormatNumber(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Table, ShapeAndSchemaChecks) {
  Table t;
  t.AddColumn("a", NumericColumn{1, 2});
  EXPECT_THROW(t.AddColumn("b", NumericColumn{1}), ShapeError);
  EXPECT_THROW(t.AddColumn("a", NumericColumn{1, 2}), SchemaError);
  EXPECT_THROW(t.GetColumn("nope"), SchemaError);
  t.AddColumn("s", TextColumn{"1", "x"});
  EXPECT_THROW(t.GetNumeric("s"), DataError);
  const Table sub = t.Take({1, 1, 0});
  EXPECT_EQ(sub.num_rows(), 3u);
  EXPECT_EQ(std::get<NumericColumn>(sub.GetColumn("a")), (NumericColumn{2, 2, 1}));
}

TEST(Csv, ReadInfersColumnTypesAndRoundTrips) {
  std::istringstream in("a,b,c\n1,x,\"q,1\"\n2.5,,\"he said \"\"hi\"\"\"\n");
  const Table t = ReadCsv(in);
  ASSERT_EQ(t.num_rows(), 2u);
  EXPECT_TRUE(std::holds_alternative<NumericColumn>(t.GetColumn("a")));
  EXPECT_TRUE(std::holds_alternative<TextColumn>(t.GetColumn("b")));
  EXPECT_EQ(std::get<TextColumn>(t.GetColumn("c"))[0], "q,1");
  EXPECT_EQ(std::get<TextColumn>(t.GetColumn("c"))[1], "he said \"hi\"");
  std::ostringstream out;
  WriteCsv(out, t);
  std::istringstream back(out.str());
  const Table t2 = ReadCsv(back);
  EXPECT_EQ(std::get<NumericColumn>(t2.GetColumn("a")), (NumericColumn{1, 2.5}));
  EXPECT_EQ(std::get<TextColumn>(t2.GetColumn("c")), std::get<TextColumn>(t.GetColumn("c")));

  std::istringstream ragged("a,b\n1\n");
  EXPECT_THROW(ReadCsv(ragged), ShapeError);
  EXPECT_THROW(ReadCsvFile("/nonexistent/file.csv"), IoError);
}

}  // namespace
}  // namespace cycboost

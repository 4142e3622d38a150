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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cycboost/archive.hpp"
#include "cycboost/conjugate.hpp"
#include "cycboost/error.hpp"
#include "cycboost/uplift.hpp"
#include "test_util.hpp"

namespace cycboost {
namespace {

struct Trial {
  Table data;
  std::vector<double> y;
  std::vector<double> w;
  std::vector<double> effect;
};

// Baseline depends on c and x; the treatment adds an effect that depends on
// c only. Roughly 40% of rows are treated.
Trial MakeTrial(std::size_t n, std::uint64_t seed) {
  auto d = testing::MixedData(n, seed, Mode::kAdditive);
  std::mt19937_64 rng(seed + 1000);
  std::bernoulli_distribution treated(0.4);
  const auto& c = std::get<TextColumn>(d.data.GetColumn("c"));
  Trial t;
  t.y = d.y;
  for (std::size_t i = 0; i < n; ++i) {
    const double effect = 0.5 * (c[i].back() - '0');  // 0, 0.5, ..., 2.5
    t.effect.push_back(effect);
    if (treated(rng)) {
      t.y[i] += effect;
      t.w.push_back(1.0);
    } else {
      t.w.push_back(-1.0);
    }
  }
  t.data = std::move(d.data);
  return t;
}

TrainingConfig UpliftConfig() {
  TrainingConfig cfg;
  cfg.mode = Mode::kAdditive;
  cfg.features = {FeatureSpec::Categorical("c"), FeatureSpec::Continuous("x", 10)};
  cfg.max_cycles = 5;
  return cfg;
}

TEST(Uplift, NormalizedGroupsHaveEqualMass) {
  const std::vector<double> w = {1, 1, 1, -1};
  const std::vector<double> n = NormalizeGroupWeights(w);
  EXPECT_DOUBLE_EQ(n[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(n[3], -2.0);
  double sum = 0.0, abs_sum = 0.0;
  for (const double v : n) {
    sum += v;
    abs_sum += std::abs(v);
  }
  EXPECT_NEAR(sum, 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(abs_sum, 4.0);
}

TEST(Uplift, RecoversEffects) {
  const Trial t = MakeTrial(40000, 3);
  const UpliftModel m = TrainUplift(t.data, t.y, t.w, UpliftConfig());
  const std::vector<double> est = EstimateEffects(m, t.data);
  double err = 0.0, mean_effect = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    err += std::abs(est[i] - t.effect[i]);
    mean_effect += t.effect[i];
  }
  const double n = static_cast<double>(est.size());
  EXPECT_LT(err / n, 0.1);
  EXPECT_NEAR(m.model.mu, mean_effect / n, 0.05);
  EXPECT_EQ(m.model.mode, Mode::kAdditive);
}

TEST(Uplift, SignFlipNegatesEffects) {
  const Trial t = MakeTrial(5000, 4);
  std::vector<double> flipped(t.w);
  for (double& v : flipped) v = -v;
  const UpliftModel a = TrainUplift(t.data, t.y, t.w, UpliftConfig());
  const UpliftModel b = TrainUplift(t.data, t.y, flipped, UpliftConfig());
  EXPECT_NEAR(a.model.mu, -b.model.mu, 1e-12);
  const std::vector<double> ea = EstimateEffects(a, t.data);
  const std::vector<double> eb = EstimateEffects(b, t.data);
  for (std::size_t i = 0; i < ea.size(); ++i) EXPECT_NEAR(ea[i], -eb[i], 1e-10);
}

TEST(Uplift, ShiftingTreatedOutcomesShiftsEffects) {
  const Trial t = MakeTrial(5000, 5);
  std::vector<double> shifted(t.y);
  for (std::size_t i = 0; i < shifted.size(); ++i) {
    if (t.w[i] > 0) shifted[i] += 3.0;
  }
  const UpliftModel a = TrainUplift(t.data, t.y, t.w, UpliftConfig());
  const UpliftModel b = TrainUplift(t.data, shifted, t.w, UpliftConfig());
  EXPECT_NEAR(b.model.mu - a.model.mu, 3.0, 1e-9);
  const std::vector<double> ea = EstimateEffects(a, t.data);
  const std::vector<double> eb = EstimateEffects(b, t.data);
  for (std::size_t i = 0; i < ea.size(); ++i) EXPECT_NEAR(eb[i] - ea[i], 3.0, 1e-8);

  // A common shift of every outcome cancels.
  std::vector<double> common(t.y);
  for (double& v : common) v += 7.0;
  const UpliftModel c = TrainUplift(t.data, common, t.w, UpliftConfig());
  const std::vector<double> ec = EstimateEffects(c, t.data);
  for (std::size_t i = 0; i < ea.size(); ++i) EXPECT_NEAR(ec[i], ea[i], 1e-8);
}

TEST(Uplift, MatchedPairLeavesSignedSumsUnchanged) {
  const std::vector<double> y = {1, 4, 2}, yhat = {0.5, 0.5, 0.5}, w = {1, -1, 1};
  const std::vector<BinIndex> bins = {0, 0, 0};
  const auto base = AggregateGaussian({y, yhat, w, bins, 2});
  const std::vector<double> y2 = {1, 4, 2, 9, 9}, yhat2 = {0.5, 0.5, 0.5, 0.5, 0.5};
  const std::vector<double> w2 = {1, -1, 1, 1, -1};
  const std::vector<BinIndex> bins2 = {0, 0, 0, 0, 0};
  const auto paired = AggregateGaussian({y2, yhat2, w2, bins2, 2});
  EXPECT_DOUBLE_EQ(paired[0].weighted_residual_sum, base[0].weighted_residual_sum);
  EXPECT_DOUBLE_EQ(paired[0].weight_sum, base[0].weight_sum);
  EXPECT_EQ(paired[0].count, base[0].count + 2);
}

TEST(Uplift, RawPositiveWeightsReduceToAdditiveTraining) {
  const Trial t = MakeTrial(3000, 6);
  const std::vector<double> ones(t.y.size(), 1.0);
  UpliftOptions raw;
  raw.normalize_groups = false;
  const UpliftModel u = TrainUplift(t.data, t.y, ones, UpliftConfig(), raw);
  const Model plain = Train(t.data, t.y, ones, UpliftConfig());
  EXPECT_EQ(SaveModelToString(u.model), SaveModelToString(plain));
  EXPECT_TRUE(u.warnings.empty());
  EXPECT_EQ(u.imbalance, 1.0);
}

TEST(Uplift, Errors) {
  const Trial t = MakeTrial(200, 7);
  TrainingConfig mult = UpliftConfig();
  mult.mode = Mode::kMultiplicative;
  EXPECT_THROW(TrainUplift(t.data, t.y, t.w, mult), ModeError);

  const std::vector<double> pos(t.y.size(), 1.0), neg(t.y.size(), -1.0), zero(t.y.size(), 0.0);
  EXPECT_THROW(TrainUplift(t.data, t.y, pos, UpliftConfig()), ModeError);
  EXPECT_THROW(TrainUplift(t.data, t.y, neg, UpliftConfig()), ModeError);
  UpliftOptions raw;
  raw.normalize_groups = false;
  EXPECT_THROW(TrainUplift(t.data, t.y, neg, UpliftConfig(), raw), ModeError);
  EXPECT_THROW(TrainUplift(t.data, t.y, zero, UpliftConfig()), DegenerateWeightsError);
  EXPECT_THROW(TrainUplift(t.data, t.y, std::vector<double>{1, -1}, UpliftConfig()),
               ShapeError);
}

TEST(Uplift, ImbalanceWarning) {
  const Trial t = MakeTrial(2000, 8);  // ~40% treated: imbalance ~0.2
  const UpliftModel m = TrainUplift(t.data, t.y, t.w, UpliftConfig());
  EXPECT_GT(m.imbalance, 0.1);
  ASSERT_EQ(m.warnings.size(), 1u);
  EXPECT_NE(m.warnings[0].find("imbalanced"), std::string::npos);

  std::vector<double> balanced(t.w.size());
  for (std::size_t i = 0; i < balanced.size(); ++i) balanced[i] = i % 2 ? 1.0 : -1.0;
  const UpliftModel b = TrainUplift(t.data, t.y, balanced, UpliftConfig());
  EXPECT_EQ(b.imbalance, 0.0);
  EXPECT_TRUE(b.warnings.empty());
}

TEST(Uplift, GroupLabels) {
  EXPECT_EQ(GroupWeightsFromLabels(TextColumn{"t", "c", "t"}, "t", "c"),
            (std::vector<double>{1, -1, 1}));
  EXPECT_EQ(GroupWeightsFromLabels(NumericColumn{1, 0}, "1", "0"), (std::vector<double>{1, -1}));
  EXPECT_THROW(GroupWeightsFromLabels(TextColumn{"t", "x"}, "t", "c"), DataError);
}

}  // namespace
}  // namespace cycboost

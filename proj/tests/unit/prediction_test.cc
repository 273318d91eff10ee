// Copyright 2026 The Synbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "synbench/prediction.h"

#include <cmath>
#include <vector>

#include "fixtures.h"
#include "gtest/gtest.h"
#include "synbench/baseline.h"
#include "synbench/error.h"
#include "synbench/random.h"

namespace synbench {
namespace {

// Fraction of (positive, negative) pairs ordered correctly; ties count half.
double PairwiseAuroc(const std::vector<double>& s, const std::vector<double>& y) {
  double good = 0, pairs = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    for (size_t j = 0; j < s.size(); ++j) {
      if (y[i] != 1 || y[j] != 0) continue;
      pairs += 1;
      if (s[i] > s[j]) good += 1;
      if (s[i] == s[j]) good += 0.5;
    }
  }
  return good / pairs;
}

TEST(AurocTest, HandValues) {
  std::vector<double> y = {0, 0, 1, 1};
  std::vector<double> perfect = {0.1, 0.2, 0.8, 0.9};
  std::vector<double> flat = {0.5, 0.5, 0.5, 0.5};
  EXPECT_EQ(Auroc(perfect, y), 1.0);
  EXPECT_EQ(Auroc(flat, y), 0.5);
  std::vector<double> reversed = {0.9, 0.8, 0.2, 0.1};
  EXPECT_EQ(Auroc(reversed, y), 0.0);
}

TEST(AurocTest, MatchesPairwiseOracleExactly) {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = 2 + rng.UniformIndex(7);
    std::vector<double> s(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.UniformIndex(4));
      y[i] = rng.Bernoulli(0.5);
    }
    y[0] = 0;
    y[1] = 1;
    ASSERT_EQ(Auroc(s, y), PairwiseAuroc(s, y)) << "trial " << trial;
  }
}

TEST(AurocTest, SingleClassIsAnError) {
  std::vector<double> s = {0.1, 0.2}, y = {1, 1};
  try {
    Auroc(s, y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingleClass);
  }
}

TEST(BootstrapAurocCiTest, ContainsPointAndIsDeterministic) {
  Rng rng(2);
  std::vector<double> s(200), y(200);
  for (size_t i = 0; i < 200; ++i) {
    y[i] = rng.Bernoulli(0.3);
    s[i] = y[i] + rng.Uniform01() * 2;
  }
  const double point = Auroc(s, y);
  Interval ci = BootstrapAurocCi(s, y, 500, 7);
  EXPECT_LE(ci.lo, point);
  EXPECT_GE(ci.hi, point);
  EXPECT_LT(ci.hi - ci.lo, 0.3);
  Interval again = BootstrapAurocCi(s, y, 500, 7);
  EXPECT_EQ(ci.lo, again.lo);
  EXPECT_EQ(ci.hi, again.hi);
}

TEST(LogisticRegressionTest, LearnsInformativeDirection) {
  Rng rng(4);
  Eigen::MatrixXd x(400, 2);
  Eigen::VectorXd y(400);
  for (int i = 0; i < 400; ++i) {
    x(i, 0) = rng.Uniform01();
    x(i, 1) = rng.Uniform01();
    y(i) = rng.Bernoulli(x(i, 0) > 0.5 ? 0.9 : 0.1);
  }
  auto model = LogisticRegression().Fit(x, y, 0);
  auto* linear = dynamic_cast<LinearModel*>(model.get());
  ASSERT_NE(linear, nullptr);
  EXPECT_GT(linear->weights()(0), 2.0);
  EXPECT_LT(std::abs(linear->weights()(1)), 1.0);
  Eigen::VectorXd s = model->Score(x);
  std::vector<double> sv(s.data(), s.data() + s.size()), yv(y.data(), y.data() + y.size());
  EXPECT_GT(Auroc(sv, yv), 0.8);
}

TEST(PermutationImportanceTest, RanksInformativeFeatureFirst) {
  Rng rng(5);
  Eigen::MatrixXd x(300, 3);
  Eigen::VectorXd y(300);
  for (int i = 0; i < 300; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = rng.Uniform01();
    y(i) = x(i, 1) > 0.5;
  }
  auto model = LogisticRegression().Fit(x, y, 0);
  std::vector<std::string> names = {"a", "b", "c"};
  auto imp = PermutationImportance(*model, x, y, names, 5, 1);
  ASSERT_EQ(imp.size(), 3u);
  EXPECT_EQ(imp[0].feature, "b");
  EXPECT_GT(imp[0].importance, 0.2);
}

TEST(FeatureOverlapTest, CountsSharedTopM) {
  std::vector<std::string> a = {"x", "y", "z", "w"};
  std::vector<std::string> b = {"z", "x", "q", "y"};
  EXPECT_EQ(FeatureOverlap(a, b, 2), 1);
  EXPECT_EQ(FeatureOverlap(a, b, 3), 2);
  EXPECT_EQ(FeatureOverlap(a, b, 4), 3);
  EXPECT_EQ(FeatureOverlap(a, a, 4), 4);
  EXPECT_THROW(FeatureOverlap(a, b, 5), Error);
}

TEST(EvaluateTest, RealDataBeatsChanceAndBaselineDoesNot) {
  testing::FixtureOptions o;
  o.rows = 3000;
  Dataset all = testing::MakeEhrFixture(o);
  auto [train, eval] = Split(all, 0.7, 1, true);
  PredictionOptions opts;
  opts.bootstrap_resamples = 200;
  LogisticRegression clf;
  PredictionReport real = EvaluateTstr(train, eval, clf, opts, 1);
  EXPECT_GT(real.auroc, 0.6);
  EXPECT_FALSE(real.degenerate);
  EXPECT_EQ(real.importances.size(), train.schema().size() - 1);

  GenerationRequest req;
  req.n_out = train.rows();
  req.seed = 2;
  Dataset baseline = SampleMarginal(train, req);
  PredictionReport trts = EvaluateTrts(eval, baseline, clf, opts, 1);
  EXPECT_NEAR(trts.auroc, 0.5, 0.05);
  EXPECT_EQ(trts.direction, PredictionDirection::kTrts);
}

TEST(EvaluateTest, SingleLabelSyntheticIsDegenerate) {
  Dataset real = testing::RandomTable(100, 3, 2, 1);
  Eigen::MatrixXd v = real.values();
  v.col(v.cols() - 1).setOnes();
  Dataset synth(real.schema(), v);
  PredictionOptions opts;
  opts.bootstrap_resamples = 50;
  PredictionReport r = EvaluateTstr(synth, real, LogisticRegression(), opts, 1);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.auroc, 0.5);
  // A real side with one label is a hard error.
  EXPECT_THROW(EvaluateTstr(real, synth, LogisticRegression(), opts, 1), Error);
}

TEST(CalibrateTopMTest, ReturnsUsableCount) {
  testing::FixtureOptions o;
  o.rows = 1500;
  Dataset all = testing::MakeEhrFixture(o);
  auto [train, eval] = Split(all, 0.7, 1, true);
  int m = CalibrateTopM(train, eval, LogisticRegression(), 0.9, 1, 2);
  EXPECT_GE(m, 1);
  EXPECT_LE(m, static_cast<int>(train.schema().size()) - 1);
}

}  // namespace
}  // namespace synbench

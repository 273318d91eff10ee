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

#include "synbench/utility_metrics.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "fixtures.h"
#include "gtest/gtest.h"
#include "synbench/error.h"
#include "synbench/random.h"

namespace synbench {
namespace {

// Integral of |F_a - F_b| over the merged support.
double CdfAreaOracle(std::vector<double> a, std::vector<double> b) {
  std::vector<double> pts = a;
  pts.insert(pts.end(), b.begin(), b.end());
  std::sort(pts.begin(), pts.end());
  auto cdf = [](const std::vector<double>& v, double t) {
    double c = 0;
    for (double x : v) c += x <= t;
    return c / static_cast<double>(v.size());
  };
  double area = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    area += std::abs(cdf(a, pts[i]) - cdf(b, pts[i])) * (pts[i + 1] - pts[i]);
  }
  return area;
}

Dataset Column(FeatureKind kind, std::vector<double> values) {
  Eigen::MatrixXd v(static_cast<Eigen::Index>(values.size()), 1);
  for (size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i), 0) = values[i];
  return Dataset(Schema({{"x", kind, FeatureRole::kFeature}}), v);
}

TEST(Wasserstein1DTest, HandValues) {
  std::vector<double> a = {0, 1}, b = {0, 1};
  EXPECT_EQ(Wasserstein1D(a, b), 0.0);
  std::vector<double> c = {0}, d = {3};
  EXPECT_EQ(Wasserstein1D(c, d), 3.0);
  std::vector<double> e = {0, 0, 1}, f = {1};
  EXPECT_NEAR(Wasserstein1D(e, f), 2.0 / 3.0, 1e-15);
}

TEST(Wasserstein1DTest, MatchesCdfOracle) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> a(1 + rng.UniformIndex(8)), b(1 + rng.UniformIndex(8));
    for (double& x : a) x = rng.Uniform01();
    for (double& x : b) x = rng.Uniform01();
    ASSERT_NEAR(Wasserstein1D(a, b), CdfAreaOracle(a, b), 1e-12);
  }
}

TEST(Wasserstein1DTest, SymmetricAndShiftInvariant) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(5), b(7);
    for (double& x : a) x = rng.Uniform01();
    for (double& x : b) x = rng.Uniform01();
    EXPECT_NEAR(Wasserstein1D(a, b), Wasserstein1D(b, a), 1e-15);
    std::vector<double> a2 = a, b2 = b;
    for (double& x : a2) x += 5;
    for (double& x : b2) x += 5;
    EXPECT_NEAR(Wasserstein1D(a, b), Wasserstein1D(a2, b2), 1e-12);
  }
}

TEST(DimensionWiseDistributionTest, IdentityIsZero) {
  Dataset d = testing::MakeEhrFixture({});
  std::vector<Dataset> synth = {d};
  DwdNormalizer norm = DwdNormalizer::Fit(d, synth);
  EXPECT_EQ(DimensionWiseDistribution(d, d, norm), 0.0);
}

TEST(DimensionWiseDistributionTest, PrevalenceDifferenceScaled) {
  Dataset real = Column(FeatureKind::kBinary, {1, 1, 0, 0});
  Dataset synth = Column(FeatureKind::kBinary, {1, 0, 0, 0});
  std::vector<Dataset> s = {synth};
  EXPECT_DOUBLE_EQ(
      DimensionWiseDistribution(real, synth, DwdNormalizer::Fit(real, s)),
      250.0);
}

TEST(DimensionWiseDistributionTest, ContinuousNormalizedAcrossCandidates) {
  Dataset real = Column(FeatureKind::kContinuous, {0, 1});
  Dataset near = Column(FeatureKind::kContinuous, {0, 2});
  Dataset mid = Column(FeatureKind::kContinuous, {0, 3});
  Dataset far = Column(FeatureKind::kContinuous, {0, 5});
  std::vector<Dataset> s = {near, mid, far};
  DwdNormalizer norm = DwdNormalizer::Fit(real, s);
  // W1 values 0.5, 1, 2 map to 0, 1/3, 1.
  EXPECT_EQ(DimensionWiseDistribution(real, near, norm), 0.0);
  EXPECT_NEAR(DimensionWiseDistribution(real, mid, norm), 1000.0 / 3.0, 1e-9);
  EXPECT_EQ(DimensionWiseDistribution(real, far, norm), 1000.0);
}

TEST(DimensionWiseDistributionTest, SeparateParadigmIgnoresOutcome) {
  Schema s({{"x", FeatureKind::kBinary, FeatureRole::kFeature},
            {"y", FeatureKind::kBinary, FeatureRole::kOutcome}});
  Eigen::MatrixXd a(2, 2), b(2, 2);
  a << 1, 1, 0, 0;
  b << 1, 0, 0, 0;
  Dataset real(s, a), synth(s, b);
  std::vector<Dataset> v = {synth};
  DwdNormalizer n = DwdNormalizer::Fit(real, v);
  EXPECT_EQ(DimensionWiseDistribution(real, synth, n, Paradigm::kSeparate), 0.0);
  EXPECT_EQ(DimensionWiseDistribution(real, synth, n, Paradigm::kCombined), 250.0);
}

TEST(CorrelationDistanceTest, IdentityIsZero) {
  Dataset d = testing::MakeEhrFixture({});
  EXPECT_EQ(CorrelationDistance(d, d), 0.0);
}

TEST(CorrelationDistanceTest, TwoColumnHandValue) {
  Schema s({{"a", FeatureKind::kContinuous, FeatureRole::kFeature},
            {"b", FeatureKind::kContinuous, FeatureRole::kFeature}});
  Eigen::MatrixXd x(3, 2), y(3, 2);
  x << 1, 1, 2, 2, 3, 3;   // r = 1
  y << 1, 3, 2, 2, 3, 1;   // r = -1
  // Mean absolute off-diagonal difference 2, scaled by 1e6.
  EXPECT_NEAR(CorrelationDistance(Dataset(s, x), Dataset(s, y)), 2e6, 1e-6);
}

TEST(PearsonCorrelationTest, ConstantColumnGivesZero) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 5, 2, 5, 3, 5;
  Eigen::MatrixXd c = PearsonCorrelation(x);
  EXPECT_EQ(c(0, 1), 0.0);
  EXPECT_EQ(c(1, 1), 1.0);
}

TEST(LatentDeviationTest, IdentityGivesFloor) {
  Dataset d = testing::MakeEhrFixture({});
  LatentResult r = LatentDeviation(d, d, {});
  // Every cluster holds equal real and synthetic counts.
  EXPECT_EQ(r.value, std::log(1e-12));
  for (size_t i = 0; i < r.real_counts.size(); ++i) {
    EXPECT_EQ(2 * r.real_counts[i], r.cluster_sizes[i]);
  }
}

TEST(LatentDeviationTest, DisjointDataGivesMaximum) {
  Dataset real = Column(FeatureKind::kContinuous, {0, 0.1, 0.2, 10, 10.1, 10.2, 20, 20.1});
  Dataset synth = Column(FeatureKind::kContinuous, {100, 100.1, 100.2});
  LatentOptions o;
  o.clusters = 2;
  LatentResult r = LatentDeviation(real, synth, o);
  // Each cluster is pure, so every deviation is 0.25.
  EXPECT_NEAR(r.value, std::log(0.25), 1e-12);
}

TEST(LatentDeviationTest, IndependentOfRowOrder) {
  testing::FixtureOptions o;
  o.rows = 300;
  Dataset real = testing::MakeEhrFixture(o);
  o.seed = 2;
  Dataset synth = testing::MakeEhrFixture(o);
  std::vector<size_t> rev;
  for (size_t i = 300; i-- > 0;) rev.push_back(i);
  LatentResult a = LatentDeviation(real, synth, {});
  LatentResult b = LatentDeviation(real.SelectRows(rev), synth.SelectRows(rev), {});
  EXPECT_EQ(a.value, b.value);
}

TEST(KnowledgeTest, DerivesSexExclusiveCodes) {
  Dataset d = testing::MakeEhrFixture({});
  KnowledgeRule rule = DeriveKnowledgeRules(d, "sex", 3);
  EXPECT_EQ(rule.group_feature, "sex");
  std::set<std::string> codes;
  for (const ExclusiveCode& c : rule.codes) {
    codes.insert(c.code);
    EXPECT_GT(c.count, 0);
    if (c.code[0] == 'f') EXPECT_EQ(c.group, 1);
    if (c.code[0] == 'm') EXPECT_EQ(c.group, 0);
  }
  EXPECT_EQ(codes, (std::set<std::string>{"f0", "f1", "f2", "m0", "m1", "m2"}));
}

TEST(KnowledgeTest, IdentityHasZeroViolations) {
  Dataset d = testing::MakeEhrFixture({});
  KnowledgeResult r = KnowledgeViolation(d, DeriveKnowledgeRules(d, "sex", 3));
  ASSERT_TRUE(r.score.has_value());
  EXPECT_EQ(*r.score, 0.0);
  for (const CodeViolation& c : r.codes) {
    if (c.carriers > 0) EXPECT_EQ(c.rate, 0.0);
  }
}

TEST(KnowledgeTest, CountsOppositeGroupCarriers) {
  Schema s({{"sex", FeatureKind::kBinary, FeatureRole::kQuasiIdentifier},
            {"preg", FeatureKind::kBinary, FeatureRole::kFeature}});
  Eigen::MatrixXd real(4, 2), synth(4, 2);
  real << 1, 1, 1, 1, 0, 0, 0, 0;
  synth << 1, 1, 0, 1, 0, 1, 0, 0;
  KnowledgeRule rule = DeriveKnowledgeRules(Dataset(s, real), "sex", 3);
  ASSERT_EQ(rule.codes.size(), 1u);
  KnowledgeResult r = KnowledgeViolation(Dataset(s, synth), rule);
  EXPECT_EQ(r.codes[0].carriers, 3);
  EXPECT_EQ(r.codes[0].violations, 2);
  EXPECT_DOUBLE_EQ(*r.score, 2.0 / 3.0);
}

TEST(KnowledgeTest, NoCarriersIsUndefined) {
  Schema s({{"sex", FeatureKind::kBinary, FeatureRole::kQuasiIdentifier},
            {"preg", FeatureKind::kBinary, FeatureRole::kFeature}});
  Eigen::MatrixXd real(2, 2), synth(2, 2);
  real << 1, 1, 0, 0;
  synth << 1, 0, 0, 0;
  KnowledgeResult r =
      KnowledgeViolation(Dataset(s, synth), DeriveKnowledgeRules(Dataset(s, real), "sex"));
  EXPECT_FALSE(r.score.has_value());
  EXPECT_TRUE(std::isnan(r.codes[0].rate));
}

TEST(MetricColumnsTest, SeparateDropsOutcome) {
  Dataset d = testing::MakeEhrFixture({});
  EXPECT_EQ(MetricColumns(d.schema(), Paradigm::kCombined).size(), d.schema().size());
  EXPECT_EQ(MetricColumns(d.schema(), Paradigm::kSeparate).size(),
            d.schema().size() - 1);
}

}  // namespace
}  // namespace synbench

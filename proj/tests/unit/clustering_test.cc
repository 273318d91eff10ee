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

#include "synbench/clustering.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "synbench/error.h"
#include "synbench/random.h"

namespace synbench {
namespace {

double Sse(const std::vector<double>& v, const std::vector<int>& labels) {
  std::map<int, std::pair<double, int>> sums;
  for (size_t i = 0; i < v.size(); ++i) {
    sums[labels[i]].first += v[i];
    sums[labels[i]].second += 1;
  }
  double cost = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    auto [s, c] = sums[labels[i]];
    cost += (v[i] - s / c) * (v[i] - s / c);
  }
  return cost;
}

// Tries every assignment of n values to k labels.
double BruteForceSse(const std::vector<double>& v, int k) {
  const size_t n = v.size();
  std::vector<int> labels(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    best = std::min(best, Sse(v, labels));
    size_t i = 0;
    while (i < n && ++labels[i] == k) labels[i++] = 0;
    if (i == n) break;
  }
  return best;
}

TEST(OptimalKMeans1DTest, MatchesExhaustiveSearch) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 1 + rng.UniformIndex(7);
    const int k = 1 + static_cast<int>(rng.UniformIndex(3));
    std::vector<double> v(n);
    for (double& x : v) x = std::floor(rng.Uniform01() * 10) / 2.0;
    KMeans1DResult r = OptimalKMeans1D(v, k);
    EXPECT_NEAR(Sse(v, r.labels), BruteForceSse(v, k), 1e-9) << "trial " << trial;
    // Clusters are numbered in ascending order of value.
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j < n; ++j) {
        if (v[i] < v[j]) EXPECT_LE(r.labels[i], r.labels[j]);
      }
    }
    int64_t total = 0;
    for (int64_t s : r.sizes) total += s;
    EXPECT_EQ(total, static_cast<int64_t>(n));
  }
}

TEST(OptimalKMeans1DTest, CapsKAtDistinctValues) {
  std::vector<double> v = {1, 1, 2, 2};
  KMeans1DResult r = OptimalKMeans1D(v, 5);
  EXPECT_EQ(r.centers.size(), 2u);
  EXPECT_EQ(r.sizes, (std::vector<int64_t>{2, 2}));
}

TEST(PcaTest, KeepsDominantDirection) {
  Rng rng(9);
  Eigen::MatrixXd x(200, 3);
  for (int i = 0; i < 200; ++i) {
    double t = rng.Uniform01() * 10;
    x(i, 0) = t;
    x(i, 1) = 2 * t + 0.01 * rng.Uniform01();
    x(i, 2) = 0.01 * rng.Uniform01();
  }
  PcaResult p = Pca(x, 0.8);
  EXPECT_EQ(p.dims, 1);
  EXPECT_GT(p.explained_ratio(0), 0.99);
  EXPECT_EQ(p.projected.cols(), 1);
  // Projected scores are centered.
  EXPECT_NEAR(p.projected.col(0).mean(), 0.0, 1e-9);
  // Ratios are descending and sum to one.
  EXPECT_NEAR(p.explained_ratio.sum(), 1.0, 1e-12);
  EXPECT_GE(p.explained_ratio(0), p.explained_ratio(1));
  EXPECT_EQ(Pca(x, 1.0).dims, 3);
}

TEST(PcaTest, ConstantDataGivesOneZeroComponent) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Constant(5, 2, 3.0);
  PcaResult p = Pca(x, 0.8);
  EXPECT_EQ(p.dims, 1);
  EXPECT_EQ(p.projected.norm(), 0.0);
}

TEST(KMeansTest, SeparatesWellSeparatedBlobs) {
  Rng rng(1);
  Eigen::MatrixXd x(90, 2);
  for (int i = 0; i < 90; ++i) {
    double cx = (i % 3) * 10.0;
    x(i, 0) = cx + rng.Uniform01();
    x(i, 1) = -cx + rng.Uniform01();
  }
  KMeansResult r = KMeans(x, {3, 300, 1e-6, 4});
  for (int i = 3; i < 90; ++i) EXPECT_EQ(r.labels[i], r.labels[i % 3]);
  std::set<int> distinct(r.labels.begin(), r.labels.end());
  EXPECT_EQ(distinct.size(), 3u);
}

TEST(KMeansTest, DeterministicInSeed) {
  Rng rng(2);
  Eigen::MatrixXd x(50, 3);
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 3; ++j) x(i, j) = rng.Uniform01();
  }
  KMeansResult a = KMeans(x, {4, 300, 1e-6, 17});
  KMeansResult b = KMeans(x, {4, 300, 1e-6, 17});
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.centroids, b.centroids);
}

TEST(KMeansTest, MoreClustersThanPointsIsAnError) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2, 1);
  EXPECT_THROW(KMeans(x, {3, 300, 1e-6, 0}), Error);
}

TEST(KMeansTest, IdenticalPointsDoNotCrash) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(10, 2);
  KMeansResult r = KMeans(x, {3, 300, 1e-6, 0});
  EXPECT_EQ(r.labels.size(), 10u);
}

}  // namespace
}  // namespace synbench

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

#ifndef SYNBENCH_CLUSTERING_H_
#define SYNBENCH_CLUSTERING_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace synbench {

struct PcaResult {
  // n x dims scores of the centered data.
  Eigen::MatrixXd projected;
  int dims = 0;
  // Explained-variance ratio per component, descending.
  Eigen::VectorXd explained_ratio;
};

// Keeps the smallest number of leading components whose cumulative explained
// variance reaches `variance_target`. Component signs are fixed so that the
// largest-magnitude loading is positive.
PcaResult Pca(const Eigen::MatrixXd& x, double variance_target);

struct KMeansOptions {
  int k = 3;
  int max_iterations = 300;
  double tolerance = 1e-6;
  uint64_t seed = 0;
};

struct KMeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;
  int iterations = 0;
};

// k-means++ seeding followed by Lloyd iterations. Distance ties go to the
// lower cluster index; a cluster that loses all points keeps its centroid.
KMeansResult KMeans(const Eigen::MatrixXd& points, const KMeansOptions& options);

struct KMeans1DResult {
  // Cluster of each input value, clusters numbered in ascending value order.
  std::vector<int> labels;
  std::vector<double> centers;
  std::vector<int64_t> sizes;
};

// Globally optimal 1-D k-means (minimum within-cluster sum of squares).
// Equal values always share a cluster. k is capped at the number of distinct
// values.
KMeans1DResult OptimalKMeans1D(std::span<const double> values, int k);

}  // namespace synbench

#endif  // SYNBENCH_CLUSTERING_H_

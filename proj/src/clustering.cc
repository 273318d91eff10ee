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
#include <numeric>
#include <string>

#include "synbench/error.h"
#include "synbench/random.h"

namespace synbench {
namespace {

double SquaredDistance(const double* a, const double* b, Eigen::Index d) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

}  // namespace

PcaResult Pca(const Eigen::MatrixXd& x, double variance_target) {
  if (x.rows() == 0 || x.cols() == 0) {
    throw Error(ErrorCode::kEmptySample, "PCA of an empty matrix");
  }
  if (!(variance_target > 0.0 && variance_target <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "variance target must lie in (0,1]");
  }
  Eigen::RowVectorXd mean = x.colwise().mean();
  Eigen::MatrixXd centered = x.rowwise() - mean;
  const double denom = std::max<double>(1.0, static_cast<double>(x.rows() - 1));
  Eigen::MatrixXd cov = (centered.transpose() * centered) / denom;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const Eigen::Index p = cov.rows();
  Eigen::VectorXd values(p);
  Eigen::MatrixXd vectors(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    values(i) = std::max(0.0, solver.eigenvalues()(p - 1 - i));
    vectors.col(i) = solver.eigenvectors().col(p - 1 - i);
  }

  PcaResult result;
  const double total = values.sum();
  if (!(total > 0.0)) {
    result.dims = 1;
    result.explained_ratio = Eigen::VectorXd::Zero(p);
    result.projected = Eigen::MatrixXd::Zero(x.rows(), 1);
    return result;
  }
  result.explained_ratio = values / total;
  double cumulative = 0.0;
  int dims = static_cast<int>(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    cumulative += result.explained_ratio(i);
    if (cumulative >= variance_target - 1e-12) {
      dims = static_cast<int>(i + 1);
      break;
    }
  }
  for (int i = 0; i < dims; ++i) {
    Eigen::Index arg = 0;
    vectors.col(i).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, i) < 0.0) vectors.col(i) *= -1.0;
  }
  result.dims = dims;
  result.projected = centered * vectors.leftCols(dims);
  return result;
}

KMeansResult KMeans(const Eigen::MatrixXd& points,
                    const KMeansOptions& options) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  const int k = options.k;
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (n < k) {
    throw Error(ErrorCode::kInvalidArgument,
                "k = " + std::to_string(k) + " exceeds the " +
                    std::to_string(n) + " available points");
  }
  // Column-major d x n keeps each point contiguous.
  const Eigen::MatrixXd pts = points.transpose();
  Eigen::MatrixXd centroids(d, k);
  Rng rng(options.seed);

  std::vector<bool> chosen(static_cast<size_t>(n), false);
  Eigen::Index first = static_cast<Eigen::Index>(
      rng.UniformIndex(static_cast<size_t>(n)));
  centroids.col(0) = pts.col(first);
  chosen[static_cast<size_t>(first)] = true;
  std::vector<double> nearest(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    nearest[static_cast<size_t>(i)] =
        SquaredDistance(pts.col(i).data(), centroids.col(0).data(), d);
  }
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : nearest) total += v;
    Eigen::Index pick = -1;
    if (total > 0.0) {
      double r = rng.Uniform01() * total;
      double cumulative = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        double w = nearest[static_cast<size_t>(i)];
        if (w <= 0.0) continue;
        cumulative += w;
        pick = i;
        if (cumulative > r) break;
      }
    } else {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!chosen[static_cast<size_t>(i)]) {
          pick = i;
          break;
        }
      }
    }
    chosen[static_cast<size_t>(pick)] = true;
    centroids.col(c) = pts.col(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      double dist = SquaredDistance(pts.col(i).data(), centroids.col(c).data(), d);
      nearest[static_cast<size_t>(i)] =
          std::min(nearest[static_cast<size_t>(i)], dist);
    }
  }

  KMeansResult result;
  result.labels.assign(static_cast<size_t>(n), 0);
  Eigen::MatrixXd sums(d, k);
  std::vector<int64_t> counts(static_cast<size_t>(k));
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    result.iterations = iter;
    sums.setZero();
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_dist = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        double dist =
            SquaredDistance(pts.col(i).data(), centroids.col(c).data(), d);
        if (dist < best_dist) {
          best_dist = dist;
          best = c;
        }
      }
      result.labels[static_cast<size_t>(i)] = best;
      sums.col(best) += pts.col(i);
      ++counts[static_cast<size_t>(best)];
    }
    double movement = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<size_t>(c)] == 0) continue;
      Eigen::VectorXd updated =
          sums.col(c) / static_cast<double>(counts[static_cast<size_t>(c)]);
      movement = std::max(movement, (updated - centroids.col(c)).norm());
      centroids.col(c) = updated;
    }
    if (movement <= options.tolerance) break;
  }
  // Final assignment against the settled centroids.
  for (Eigen::Index i = 0; i < n; ++i) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      double dist =
          SquaredDistance(pts.col(i).data(), centroids.col(c).data(), d);
      if (dist < best_dist) {
        best_dist = dist;
        best = c;
      }
    }
    result.labels[static_cast<size_t>(i)] = best;
  }
  result.centroids = centroids.transpose();
  return result;
}

KMeans1DResult OptimalKMeans1D(std::span<const double> values, int k) {
  if (values.empty()) {
    throw Error(ErrorCode::kEmptySample, "1-D k-means of an empty sample");
  }
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct;
  std::vector<double> weight;
  for (double v : sorted) {
    if (distinct.empty() || v != distinct.back()) {
      distinct.push_back(v);
      weight.push_back(1.0);
    } else {
      weight.back() += 1.0;
    }
  }
  const size_t u = distinct.size();
  const size_t clusters = std::min<size_t>(static_cast<size_t>(k), u);

  // Shifted prefix sums limit cancellation in the sum-of-squares formula.
  const double shift = distinct[u / 2];
  std::vector<double> w(u + 1, 0.0), s1(u + 1, 0.0), s2(u + 1, 0.0);
  for (size_t i = 0; i < u; ++i) {
    double x = distinct[i] - shift;
    w[i + 1] = w[i] + weight[i];
    s1[i + 1] = s1[i] + weight[i] * x;
    s2[i + 1] = s2[i] + weight[i] * x * x;
  }
  auto cost = [&](size_t i, size_t j) {  // inclusive range of distinct values
    double ww = w[j + 1] - w[i];
    double a = s1[j + 1] - s1[i];
    double b = s2[j + 1] - s2[i];
    return std::max(0.0, b - a * a / ww);
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best(clusters, std::vector<double>(u, inf));
  std::vector<std::vector<size_t>> start(clusters, std::vector<size_t>(u, 0));
  for (size_t j = 0; j < u; ++j) best[0][j] = cost(0, j);

  // Optimal split points are monotone in j, so divide and conquer applies.
  for (size_t m = 1; m < clusters; ++m) {
    auto solve = [&](auto&& self, size_t lo, size_t hi, size_t opt_lo,
                     size_t opt_hi) -> void {
      if (lo > hi) return;
      size_t mid = lo + (hi - lo) / 2;
      double best_value = inf;
      size_t best_start = std::max(opt_lo, m);
      for (size_t i = std::max(opt_lo, m); i <= std::min(mid, opt_hi); ++i) {
        double value = best[m - 1][i - 1] + cost(i, mid);
        if (value < best_value) {
          best_value = value;
          best_start = i;
        }
      }
      best[m][mid] = best_value;
      start[m][mid] = best_start;
      if (mid > lo) self(self, lo, mid - 1, opt_lo, best_start);
      self(self, mid + 1, hi, best_start, opt_hi);
    };
    solve(solve, m, u - 1, m, u - 1);
  }

  std::vector<size_t> boundary(clusters + 1);
  boundary[clusters] = u;
  size_t end = u - 1;
  for (size_t m = clusters; m-- > 0;) {
    size_t s = m == 0 ? 0 : start[m][end];
    boundary[m] = s;
    if (m > 0) end = s - 1;
  }

  KMeans1DResult result;
  result.centers.resize(clusters);
  result.sizes.resize(clusters);
  for (size_t c = 0; c < clusters; ++c) {
    size_t i = boundary[c], j = boundary[c + 1] - 1;
    double ww = w[j + 1] - w[i];
    result.centers[c] = (s1[j + 1] - s1[i]) / ww + shift;
    result.sizes[c] = static_cast<int64_t>(std::llround(ww));
  }
  result.labels.resize(values.size());
  for (size_t r = 0; r < values.size(); ++r) {
    size_t pos = static_cast<size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), values[r]) -
        distinct.begin());
    size_t c = static_cast<size_t>(
        std::upper_bound(boundary.begin() + 1, boundary.end(), pos) -
        (boundary.begin() + 1));
    result.labels[r] = static_cast<int>(c);
  }
  return result;
}

}  // namespace synbench

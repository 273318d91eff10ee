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

// Statistics-level and record-level utility metrics. All functions expect
// real and synthetic datasets with identical schemas, already normalized.

#ifndef SYNBENCH_UTILITY_METRICS_H_
#define SYNBENCH_UTILITY_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "synbench/dataset.h"

namespace synbench {

// Columns a marginal/correlation metric looks at: everything, minus the
// outcome under the Separate paradigm where label proportions are fixed by
// construction.
std::vector<size_t> MetricColumns(const Schema& schema, Paradigm paradigm);

// 1-Wasserstein distance between two empirical distributions. Inputs need
// not be sorted.
double Wasserstein1D(std::span<const double> a, std::span<const double> b);

// Min-max rescaling of per-feature Wasserstein distances, fitted over every
// synthetic dataset in a benchmark.
class DwdNormalizer {
 public:
  DwdNormalizer() = default;
  explicit DwdNormalizer(std::map<std::string, ValueRange> ranges)
      : ranges_(std::move(ranges)) {}

  static DwdNormalizer Fit(const Dataset& real,
                           std::span<const Dataset> synthetic);

  const std::map<std::string, ValueRange>& ranges() const { return ranges_; }
  double Apply(std::string_view feature, double distance) const;

 private:
  std::map<std::string, ValueRange> ranges_;
};

// Mean over features of |prevalence difference| (binary) or normalized
// Wasserstein distance (continuous), times 1000.
double DimensionWiseDistribution(const Dataset& real, const Dataset& synth,
                                 const DwdNormalizer& normalizer,
                                 Paradigm paradigm = Paradigm::kCombined);

// Pearson correlation matrix; a constant column correlates 0 with everything
// (its diagonal entry stays 1).
Eigen::MatrixXd PearsonCorrelation(const Eigen::MatrixXd& x);

// Mean absolute off-diagonal difference of the two correlation matrices,
// times 1e6.
double CorrelationDistance(const Dataset& real, const Dataset& synth,
                           Paradigm paradigm = Paradigm::kCombined);

struct LatentOptions {
  double variance_target = 0.8;
  int clusters = 3;
  int max_iterations = 300;
  double tolerance = 1e-6;
  uint64_t seed = 0;
};

struct LatentResult {
  // ln(max(mean_i (real_fraction_i - 0.5)^2, 1e-12)).
  double value = 0.0;
  int pca_dims = 0;
  std::vector<int64_t> real_counts;
  std::vector<int64_t> cluster_sizes;
};

// Clusters the stacked real+synthetic records in PCA space and measures how
// far each cluster's real share drifts from one half. Empty clusters are left
// out of the mean. Rows are put in a canonical order first, so the result
// does not depend on the row order of either input.
LatentResult LatentDeviation(const Dataset& real, const Dataset& synth,
                             const LatentOptions& options,
                             Paradigm paradigm = Paradigm::kCombined);

struct ExclusiveCode {
  std::string code;
  // Group value (0 or 1) the code is exclusive to in the real data.
  int group = 0;
  int64_t count = 0;
  double prevalence = 0.0;
};

struct KnowledgeRule {
  std::string group_feature;
  std::vector<ExclusiveCode> codes;
};

// For each group value, the `top_m` most prevalent binary feature codes seen
// only in that group (ties by name).
KnowledgeRule DeriveKnowledgeRules(const Dataset& real,
                                   std::string_view group_feature,
                                   int top_m = 3);

struct CodeViolation {
  std::string code;
  int group = 0;
  int64_t carriers = 0;
  int64_t violations = 0;
  // violations / carriers; NaN without carriers.
  double rate = 0.0;
};

struct KnowledgeResult {
  // Mean of the defined per-code rates; empty when none is defined.
  std::optional<double> score;
  std::vector<CodeViolation> codes;
};

KnowledgeResult KnowledgeViolation(const Dataset& synth,
                                   const KnowledgeRule& rule);

}  // namespace synbench

#endif  // SYNBENCH_UTILITY_METRICS_H_

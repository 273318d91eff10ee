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

// Adversary simulations against a synthetic dataset: attribute inference,
// membership inference and meaningful identity disclosure.

#ifndef SYNBENCH_PRIVACY_H_
#define SYNBENCH_PRIVACY_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "synbench/dataset.h"
#include "synbench/prediction.h"

namespace synbench {

// F1 of binary predictions; 0 when precision + recall = 0.
double F1Score(std::span<const double> predicted, std::span<const double> truth);

// Percentile bootstrap over target records. `evaluate` maps a multiset of
// target indices (with repetition) to a risk. The interval is widened to
// contain `point`.
Interval BootstrapRiskCi(size_t n_targets,
                         const std::function<double(std::span<const size_t>)>&
                             evaluate,
                         double point, int resamples, uint64_t seed);

// ---- Attribute inference ----

struct AttributeAttackConfig {
  int k_neighbors = 1;
  // Attributes the adversary already knows; everything else except the
  // outcome is inferred.
  std::vector<std::string> known_features;
  double closeness_threshold = 0.1;
  int bootstrap_resamples = 200;
  uint64_t seed = 0;
};

// QIDs plus the `top_f` most frequent binary feature columns of `real`
// (ties by name).
std::vector<std::string> DefaultKnownFeatures(const Dataset& real, int top_f);

struct AttributeRisk {
  std::string attribute;
  FeatureKind kind = FeatureKind::kBinary;
  double weight = 0.0;
  // F1 (binary) or fraction of close predictions (continuous).
  double risk = 0.0;
  // Majority votes that ended in a tie and were resolved to 0.
  int64_t vote_ties = 0;
};

struct AttributeRiskReport {
  double risk = 0.0;
  Interval ci;
  std::vector<AttributeRisk> attributes;
};

// `targets` are the records under attack (normally the real training set);
// `real` supplies the entropy weights. All datasets share one schema and are
// normalized.
AttributeRiskReport AttributeInferenceRisk(const Dataset& targets,
                                           const Dataset& synth,
                                           const Dataset& real,
                                           const AttributeAttackConfig& config);

// ---- Membership inference ----

struct MembershipAttackConfig {
  double distance_threshold = 2.0;
  int bootstrap_resamples = 200;
  uint64_t seed = 0;
};

struct MembershipRiskReport {
  double risk = 0.0;
  Interval ci;
  double precision = 0.0;
  double recall = 0.0;
};

// Euclidean distance from each target row to its nearest synthetic row.
std::vector<double> NearestDistances(const Dataset& targets,
                                     const Dataset& synth);

// F1 of "member iff distance < threshold".
double MembershipF1(std::span<const double> distances,
                    std::span<const double> membership, double threshold);

// Targets are members ∪ non-members; member rows are the generator's
// training data.
MembershipRiskReport MembershipInferenceRisk(const Dataset& members,
                                             const Dataset& non_members,
                                             const Dataset& synth,
                                             const MembershipAttackConfig& config);

// ---- Meaningful identity disclosure ----

struct TriangularParams {
  double min = 0.8;
  double mode = 0.9;
  double max = 1.0;
};

struct DisclosureConfig {
  std::vector<std::string> qids;
  // Optional bin width per QID; values are matched on floor(v / width).
  std::map<std::string, double> generalization;
  // Fraction of sensitive attributes that must be learnable.
  double learn_fraction = 0.01;
  TriangularParams verification;
  TriangularParams data_error;
  int bootstrap_resamples = 200;
  uint64_t seed = 0;
};

struct DisclosureRecord {
  int64_t f = 0;
  int64_t big_f = 0;
  bool matched = false;
  bool learned = false;
  int64_t learnable_attributes = 0;
  double lambda = 0.0;
};

struct DisclosureRiskReport {
  double risk = 0.0;
  Interval ci;
  // The two averages whose maximum is the risk.
  double sample_term = 0.0;
  double population_term = 0.0;
  int64_t population_size = 0;
  std::vector<DisclosureRecord> records;
};

// lambda_s for record s: product of one draw from each triangular
// distribution, seeded by (seed, s).
double DisclosureLambda(const DisclosureConfig& config, size_t record);

// Runs on raw (unnormalized) values. `population` must hold every QID;
// `real` and `synth` share a schema. Sensitive attributes are all non-QID
// columns of `real`.
DisclosureRiskReport IdentityDisclosureRisk(const Dataset& synth,
                                            const Dataset& real,
                                            const Dataset& population,
                                            const DisclosureConfig& config);

// Median absolute deviation (unscaled).
double MedianAbsoluteDeviation(std::span<const double> values);

}  // namespace synbench

#endif  // SYNBENCH_PRIVACY_H_

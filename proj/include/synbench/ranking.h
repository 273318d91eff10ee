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

// Tie-adjusted ranking of synthetic datasets, per-model rank-derived scores
// and use-case weighted recommendations.

#ifndef SYNBENCH_RANKING_H_
#define SYNBENCH_RANKING_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace synbench {

enum class MetricId {
  kDwd,
  kCorrelation,
  kLatent,
  kTstr,
  kTrts,
  kFeatureSelection,
  kKnowledge,
  kAttributeInference,
  kMembershipInference,
  kIdentityDisclosure,
};

inline constexpr std::array<MetricId, 10> kAllMetrics = {
    MetricId::kDwd,
    MetricId::kCorrelation,
    MetricId::kLatent,
    MetricId::kTstr,
    MetricId::kTrts,
    MetricId::kFeatureSelection,
    MetricId::kKnowledge,
    MetricId::kAttributeInference,
    MetricId::kMembershipInference,
    MetricId::kIdentityDisclosure,
};

enum class Direction { kLower, kHigher };

// Stable identifiers used in configs and reports, e.g. "dwd".
std::string_view MetricKey(MetricId metric);
std::optional<MetricId> ParseMetricKey(std::string_view key);
Direction DirectionOf(MetricId metric);
bool IsPrivacyMetric(MetricId metric);

// Rank 1 is best. Tied values share the mean of the positions they span.
std::vector<double> RankWithTies(std::span<const double> values,
                                 Direction direction);

struct DatasetValue {
  std::string model;
  std::string dataset;
  // Empty when the metric is undefined for this dataset.
  std::optional<double> value;
};

struct RankedDataset {
  std::string model;
  std::string dataset;
  std::optional<double> value;
  double rank = 0.0;
};

struct MetricRanking {
  std::vector<RankedDataset> datasets;
  // Mean adjusted rank of each model's datasets.
  std::map<std::string, double> model_scores;
  // Models none of whose datasets has a defined value.
  std::set<std::string> undefined_models;
};

// Ranks all datasets jointly. Undefined values share the worst positions,
// after every defined value.
MetricRanking RankDerivedScores(std::span<const DatasetValue> values,
                                Direction direction);

struct WeightProfile {
  std::string name;
  std::map<MetricId, double> weights;

  // Throws kConfig on negative weights or a sum away from 1 by more than
  // 1e-9.
  void Validate() const;
};

// Education, Medical-AI and Systems-Dev. The prediction weight goes to TSTR;
// TRTS gets 0.
std::vector<WeightProfile> BuiltinProfiles();
const WeightProfile* FindProfile(std::span<const WeightProfile> profiles,
                                 std::string_view name);

// {"name": ..., "weights": {"dwd": 0.25, ...}}. Weights may be numbers or
// fraction strings like "1/6"; "prediction" is an alias for "tstr". Metrics
// left out get weight 0.
WeightProfile ParseProfileJson(std::string_view json_text);
// A single profile object or an array of them.
std::vector<WeightProfile> LoadProfiles(const std::filesystem::path& path);
std::string FormatProfileJson(const WeightProfile& profile);

struct FinalScore {
  std::string model;
  double score = 0.0;
  // Within 1e-9 of a neighbour; the order between them follows the name.
  bool tied = false;
};

using RankScores = std::map<MetricId, std::map<std::string, double>>;

// Weighted sum of rank-derived scores, ascending. Throws kMissingWeight if
// a ranked metric has no weight, and kConfig if a positively weighted metric
// was not ranked.
std::vector<FinalScore> FinalScores(const RankScores& rank_scores,
                                    const WeightProfile& profile);

// Per-model mean of the raw metric values (undefined values skipped).
std::map<std::string, std::optional<double>> MeanValues(
    std::span<const DatasetValue> values);

// Pearson correlation between metrics of their per-model rank-derived score
// vectors. Constant vectors correlate 0 off the diagonal.
Eigen::MatrixXd MetricCorrelation(const RankScores& rank_scores,
                                  std::span<const MetricId> metrics);

}  // namespace synbench

#endif  // SYNBENCH_RANKING_H_

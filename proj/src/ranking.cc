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

#include "synbench/ranking.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "csv.h"
#include "json.hpp"
#include "synbench/error.h"

namespace synbench {
namespace {

constexpr double kWeightSumTolerance = 1e-9;
constexpr double kTieTolerance = 1e-9;

double ParseWeight(const nlohmann::json& value, const std::string& key) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    std::string text = value.get<std::string>();
    auto parse = [&](std::string_view s) {
      double out = 0.0;
      auto r = std::from_chars(s.data(), s.data() + s.size(), out);
      if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw Error(ErrorCode::kConfig,
                    "weight for '" + key + "' is not a number: " + text);
      }
      return out;
    };
    size_t slash = text.find('/');
    if (slash == std::string::npos) return parse(text);
    double den = parse(std::string_view(text).substr(slash + 1));
    if (den == 0.0) {
      throw Error(ErrorCode::kConfig, "zero denominator in weight for '" +
                                          key + "'");
    }
    return parse(std::string_view(text).substr(0, slash)) / den;
  }
  throw Error(ErrorCode::kConfig, "weight for '" + key + "' must be a number");
}

WeightProfile ProfileFromJson(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("name") || !doc.contains("weights") ||
      !doc["weights"].is_object()) {
    throw Error(ErrorCode::kConfig,
                "profile needs a 'name' and a 'weights' object");
  }
  WeightProfile profile;
  profile.name = doc["name"].get<std::string>();
  for (MetricId m : kAllMetrics) profile.weights[m] = 0.0;
  for (const auto& [key, value] : doc["weights"].items()) {
    std::string metric_key = key == "prediction" ? "tstr" : key;
    auto metric = ParseMetricKey(metric_key);
    if (!metric) {
      throw Error(ErrorCode::kConfig, "unknown metric '" + key + "' in profile '" +
                                          profile.name + "'");
    }
    profile.weights[*metric] = ParseWeight(value, key);
  }
  profile.Validate();
  return profile;
}

}  // namespace

std::string_view MetricKey(MetricId metric) {
  switch (metric) {
    case MetricId::kDwd:
      return "dwd";
    case MetricId::kCorrelation:
      return "corr";
    case MetricId::kLatent:
      return "latent";
    case MetricId::kTstr:
      return "tstr";
    case MetricId::kTrts:
      return "trts";
    case MetricId::kFeatureSelection:
      return "feature_selection";
    case MetricId::kKnowledge:
      return "knowledge";
    case MetricId::kAttributeInference:
      return "attribute_inference";
    case MetricId::kMembershipInference:
      return "membership_inference";
    case MetricId::kIdentityDisclosure:
      return "identity_disclosure";
  }
  return "unknown";
}

std::optional<MetricId> ParseMetricKey(std::string_view key) {
  for (MetricId m : kAllMetrics) {
    if (MetricKey(m) == key) return m;
  }
  return std::nullopt;
}

Direction DirectionOf(MetricId metric) {
  switch (metric) {
    case MetricId::kTstr:
    case MetricId::kTrts:
    case MetricId::kFeatureSelection:
      return Direction::kHigher;
    default:
      return Direction::kLower;
  }
}

bool IsPrivacyMetric(MetricId metric) {
  return metric == MetricId::kAttributeInference ||
         metric == MetricId::kMembershipInference ||
         metric == MetricId::kIdentityDisclosure;
}

std::vector<double> RankWithTies(std::span<const double> values,
                                 Direction direction) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "nothing to rank");
  }
  const size_t n = values.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto better = [&](size_t a, size_t b) {
    return direction == Direction::kLower ? values[a] < values[b]
                                          : values[a] > values[b];
  };
  std::stable_sort(order.begin(), order.end(), better);
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i+1 .. j share their mean.
    double mean = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (size_t t = i; t < j; ++t) ranks[order[t]] = mean;
    i = j;
  }
  return ranks;
}

MetricRanking RankDerivedScores(std::span<const DatasetValue> values,
                                Direction direction) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "nothing to rank");
  }
  std::vector<size_t> defined_idx, undefined_idx;
  std::vector<double> defined;
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i].value && std::isfinite(*values[i].value)) {
      defined_idx.push_back(i);
      defined.push_back(*values[i].value);
    } else {
      undefined_idx.push_back(i);
    }
  }
  MetricRanking out;
  out.datasets.resize(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    out.datasets[i] = {values[i].model, values[i].dataset, values[i].value, 0.0};
    if (out.datasets[i].value && !std::isfinite(*out.datasets[i].value)) {
      out.datasets[i].value.reset();
    }
  }
  if (!defined.empty()) {
    std::vector<double> ranks = RankWithTies(defined, direction);
    for (size_t i = 0; i < defined_idx.size(); ++i) {
      out.datasets[defined_idx[i]].rank = ranks[i];
    }
  }
  if (!undefined_idx.empty()) {
    const double m = static_cast<double>(defined.size());
    const double u = static_cast<double>(undefined_idx.size());
    const double worst = m + (u + 1.0) / 2.0;
    for (size_t i : undefined_idx) out.datasets[i].rank = worst;
  }

  std::map<std::string, std::pair<double, int>> sums;
  std::map<std::string, bool> any_defined;
  for (const RankedDataset& d : out.datasets) {
    auto& [sum, count] = sums[d.model];
    sum += d.rank;
    ++count;
    any_defined[d.model] = any_defined[d.model] || d.value.has_value();
  }
  for (const auto& [model, sc] : sums) {
    out.model_scores[model] = sc.first / sc.second;
    if (!any_defined[model]) out.undefined_models.insert(model);
  }
  return out;
}

void WeightProfile::Validate() const {
  double sum = 0.0;
  for (const auto& [metric, w] : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kConfig,
                  "profile '" + name + "' has an invalid weight for " +
                      std::string(MetricKey(metric)));
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightSumTolerance) {
    throw Error(ErrorCode::kConfig, "weights of profile '" + name +
                                        "' sum to " + csv::FormatDouble(sum));
  }
}

std::vector<WeightProfile> BuiltinProfiles() {
  using M = MetricId;
  auto make = [](std::string name, std::array<double, 9> w) {
    WeightProfile p;
    p.name = std::move(name);
    p.weights = {
        {M::kDwd, w[0]},
        {M::kCorrelation, w[1]},
        {M::kLatent, w[2]},
        {M::kTstr, w[3]},
        {M::kTrts, 0.0},
        {M::kFeatureSelection, w[4]},
        {M::kKnowledge, w[5]},
        {M::kAttributeInference, w[6]},
        {M::kMembershipInference, w[7]},
        {M::kIdentityDisclosure, w[8]},
    };
    return p;
  };
  const double sixth = 1.0 / 6.0;
  return {
      make("Education", {0.25, 0.15, 0.1, 0.1, 0.1, 0.15, 0.05, 0.05, 0.05}),
      make("Medical-AI", {0.05, 0.05, 0.05, 0.35, 0.15, 0.05, 0.1, 0.1, 0.1}),
      make("Systems-Dev",
           {0.25, 0.05, 0.05, 0.05, 0.05, 0.05, sixth, sixth, sixth}),
  };
}

const WeightProfile* FindProfile(std::span<const WeightProfile> profiles,
                                 std::string_view name) {
  for (const WeightProfile& p : profiles) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

WeightProfile ParseProfileJson(std::string_view json_text) {
  try {
    return ProfileFromJson(nlohmann::json::parse(json_text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad profile JSON: ") + e.what());
  }
}

std::vector<WeightProfile> LoadProfiles(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(csv::ReadFile(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig,
                path.string() + ": bad profile JSON: " + e.what());
  }
  std::vector<WeightProfile> out;
  if (doc.is_array()) {
    for (const auto& item : doc) out.push_back(ProfileFromJson(item));
  } else {
    out.push_back(ProfileFromJson(doc));
  }
  return out;
}

std::string FormatProfileJson(const WeightProfile& profile) {
  nlohmann::ordered_json weights = nlohmann::ordered_json::object();
  for (MetricId m : kAllMetrics) {
    auto it = profile.weights.find(m);
    weights[std::string(MetricKey(m))] =
        it == profile.weights.end() ? 0.0 : it->second;
  }
  nlohmann::ordered_json doc = {{"name", profile.name}, {"weights", weights}};
  return doc.dump(2);
}

std::vector<FinalScore> FinalScores(const RankScores& rank_scores,
                                    const WeightProfile& profile) {
  std::map<std::string, double> totals;
  for (const auto& [metric, scores] : rank_scores) {
    auto w = profile.weights.find(metric);
    if (w == profile.weights.end()) {
      throw Error(ErrorCode::kMissingWeight,
                  "profile '" + profile.name + "' has no weight for " +
                      std::string(MetricKey(metric)));
    }
    for (const auto& [model, score] : scores) {
      totals[model] += w->second * score;
    }
  }
  for (const auto& [metric, w] : profile.weights) {
    if (w > 0.0 && !rank_scores.contains(metric)) {
      throw Error(ErrorCode::kConfig,
                  "profile '" + profile.name + "' weights unranked metric " +
                      std::string(MetricKey(metric)));
    }
  }
  std::vector<FinalScore> out;
  for (const auto& [model, total] : totals) out.push_back({model, total, false});
  std::sort(out.begin(), out.end(), [](const FinalScore& a, const FinalScore& b) {
    if (a.score != b.score) return a.score < b.score;
    return a.model < b.model;
  });
  for (size_t i = 1; i < out.size(); ++i) {
    if (std::abs(out[i].score - out[i - 1].score) <= kTieTolerance) {
      out[i].tied = true;
      out[i - 1].tied = true;
    }
  }
  return out;
}

std::map<std::string, std::optional<double>> MeanValues(
    std::span<const DatasetValue> values) {
  std::map<std::string, std::pair<double, int>> sums;
  std::map<std::string, std::optional<double>> out;
  for (const DatasetValue& v : values) {
    out[v.model];
    if (v.value && std::isfinite(*v.value)) {
      sums[v.model].first += *v.value;
      ++sums[v.model].second;
    }
  }
  for (const auto& [model, sc] : sums) out[model] = sc.first / sc.second;
  return out;
}

Eigen::MatrixXd MetricCorrelation(const RankScores& rank_scores,
                                  std::span<const MetricId> metrics) {
  const Eigen::Index m = static_cast<Eigen::Index>(metrics.size());
  std::vector<std::string> models;
  if (!metrics.empty()) {
    auto it = rank_scores.find(metrics.front());
    if (it != rank_scores.end()) {
      for (const auto& [model, score] : it->second) models.push_back(model);
    }
  }
  Eigen::MatrixXd data(static_cast<Eigen::Index>(models.size()), m);
  for (Eigen::Index j = 0; j < m; ++j) {
    auto it = rank_scores.find(metrics[static_cast<size_t>(j)]);
    if (it == rank_scores.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "no rank scores for " +
                      std::string(MetricKey(metrics[static_cast<size_t>(j)])));
    }
    for (size_t i = 0; i < models.size(); ++i) {
      auto s = it->second.find(models[i]);
      data(static_cast<Eigen::Index>(i), j) =
          s == it->second.end() ? 0.0 : s->second;
    }
  }
  Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
  Eigen::VectorXd norms = centered.colwise().norm();
  Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = a + 1; b < m; ++b) {
      double r = 0.0;
      if (norms(a) > 0.0 && norms(b) > 0.0) {
        r = std::clamp(centered.col(a).dot(centered.col(b)) /
                           (norms(a) * norms(b)),
                       -1.0, 1.0);
      }
      corr(a, b) = r;
      corr(b, a) = r;
    }
  }
  return corr;
}

}  // namespace synbench

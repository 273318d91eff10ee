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
#include <limits>
#include <numeric>
#include <tuple>

#include "synbench/clustering.h"
#include "synbench/error.h"

namespace synbench {
namespace {

constexpr double kLatentFloor = 1e-12;

void RequireSameSchema(const Dataset& real, const Dataset& synth) {
  if (!(real.schema() == synth.schema())) {
    throw Error(ErrorCode::kSchemaMismatch,
                "synthetic dataset '" + synth.tag().Id() +
                    "' does not share the real schema");
  }
}

std::vector<double> ColumnVector(const Dataset& d, size_t c) {
  auto col = d.column(static_cast<Eigen::Index>(c));
  return std::vector<double>(col.data(), col.data() + col.size());
}

Eigen::MatrixXd SelectedColumns(const Dataset& d,
                                std::span<const size_t> cols) {
  Eigen::MatrixXd out(d.rows(), static_cast<Eigen::Index>(cols.size()));
  for (size_t i = 0; i < cols.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) =
        d.column(static_cast<Eigen::Index>(cols[i]));
  }
  return out;
}

}  // namespace

std::vector<size_t> MetricColumns(const Schema& schema, Paradigm paradigm) {
  std::vector<size_t> out;
  for (size_t i = 0; i < schema.size(); ++i) {
    if (paradigm == Paradigm::kSeparate &&
        schema[i].role == FeatureRole::kOutcome) {
      continue;
    }
    out.push_back(i);
  }
  return out;
}

double Wasserstein1D(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw Error(ErrorCode::kEmptySample, "Wasserstein distance of an empty sample");
  }
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  // Quantile functions step at i/n and j/m; on the common grid 1/(n*m) every
  // breakpoint is an integer.
  const uint64_t n = x.size();
  const uint64_t m = y.size();
  uint64_t i = 0, j = 0, position = 0;
  double total = 0.0;
  while (i < n && j < m) {
    uint64_t next_x = (i + 1) * m;
    uint64_t next_y = (j + 1) * n;
    uint64_t next = std::min(next_x, next_y);
    total += std::abs(x[i] - y[j]) * static_cast<double>(next - position);
    position = next;
    if (next_x == next) ++i;
    if (next_y == next) ++j;
  }
  return total / (static_cast<double>(n) * static_cast<double>(m));
}

DwdNormalizer DwdNormalizer::Fit(const Dataset& real,
                                 std::span<const Dataset> synthetic) {
  std::map<std::string, ValueRange> ranges;
  for (size_t c : real.schema().IndicesWithKind(FeatureKind::kContinuous)) {
    std::vector<double> r = ColumnVector(real, c);
    ValueRange range{std::numeric_limits<double>::infinity(),
                     -std::numeric_limits<double>::infinity()};
    for (const Dataset& s : synthetic) {
      RequireSameSchema(real, s);
      double w = Wasserstein1D(r, ColumnVector(s, c));
      range.min = std::min(range.min, w);
      range.max = std::max(range.max, w);
    }
    if (synthetic.empty()) range = {0.0, 0.0};
    ranges[real.schema()[c].name] = range;
  }
  return DwdNormalizer(std::move(ranges));
}

double DwdNormalizer::Apply(std::string_view feature, double distance) const {
  auto it = ranges_.find(std::string(feature));
  if (it == ranges_.end()) {
    throw Error(ErrorCode::kMissingColumn,
                "DWD normalizer lacks feature '" + std::string(feature) + "'");
  }
  const ValueRange& r = it->second;
  if (!(r.max > r.min)) return 0.0;
  return std::clamp((distance - r.min) / (r.max - r.min), 0.0, 1.0);
}

double DimensionWiseDistribution(const Dataset& real, const Dataset& synth,
                                 const DwdNormalizer& normalizer,
                                 Paradigm paradigm) {
  RequireSameSchema(real, synth);
  std::vector<size_t> cols = MetricColumns(real.schema(), paradigm);
  if (cols.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no columns to compare");
  }
  double sum = 0.0;
  for (size_t c : cols) {
    const FeatureSpec& f = real.schema()[c];
    if (f.kind == FeatureKind::kBinary) {
      sum += std::abs(Prevalence(real, c) - Prevalence(synth, c));
    } else {
      double w = Wasserstein1D(ColumnVector(real, c), ColumnVector(synth, c));
      sum += normalizer.Apply(f.name, w);
    }
  }
  return sum / static_cast<double>(cols.size()) * 1000.0;
}

Eigen::MatrixXd PearsonCorrelation(const Eigen::MatrixXd& x) {
  const Eigen::Index p = x.cols();
  Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  Eigen::VectorXd norms = centered.colwise().norm();
  Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = i + 1; j < p; ++j) {
      double r = 0.0;
      if (norms(i) > 0.0 && norms(j) > 0.0) {
        r = centered.col(i).dot(centered.col(j)) / (norms(i) * norms(j));
        r = std::clamp(r, -1.0, 1.0);
      }
      corr(i, j) = r;
      corr(j, i) = r;
    }
  }
  return corr;
}

double CorrelationDistance(const Dataset& real, const Dataset& synth,
                           Paradigm paradigm) {
  RequireSameSchema(real, synth);
  std::vector<size_t> cols = MetricColumns(real.schema(), paradigm);
  if (cols.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "correlation distance needs at least two features");
  }
  Eigen::MatrixXd a = PearsonCorrelation(SelectedColumns(real, cols));
  Eigen::MatrixXd b = PearsonCorrelation(SelectedColumns(synth, cols));
  const double p = static_cast<double>(cols.size());
  double sum = (a - b).cwiseAbs().sum();  // diagonal cells contribute 0
  return sum / (p * (p - 1.0)) * 1e6;
}

LatentResult LatentDeviation(const Dataset& real, const Dataset& synth,
                             const LatentOptions& options, Paradigm paradigm) {
  RequireSameSchema(real, synth);
  std::vector<size_t> cols = MetricColumns(real.schema(), paradigm);
  Eigen::MatrixXd r = SelectedColumns(real, cols);
  Eigen::MatrixXd s = SelectedColumns(synth, cols);

  // (source, row); source 0 is real.
  std::vector<std::pair<int, Eigen::Index>> order;
  order.reserve(static_cast<size_t>(r.rows() + s.rows()));
  for (Eigen::Index i = 0; i < r.rows(); ++i) order.emplace_back(0, i);
  for (Eigen::Index i = 0; i < s.rows(); ++i) order.emplace_back(1, i);
  auto row_of = [&](const std::pair<int, Eigen::Index>& e) {
    return e.first == 0 ? r.row(e.second) : s.row(e.second);
  };
  std::sort(order.begin(), order.end(), [&](const auto& lhs, const auto& rhs) {
    auto a = row_of(lhs);
    auto b = row_of(rhs);
    for (Eigen::Index c = 0; c < a.size(); ++c) {
      if (a(c) != b(c)) return a(c) < b(c);
    }
    return lhs.first < rhs.first;
  });

  Eigen::MatrixXd stacked(static_cast<Eigen::Index>(order.size()), r.cols());
  for (size_t i = 0; i < order.size(); ++i) {
    stacked.row(static_cast<Eigen::Index>(i)) = row_of(order[i]);
  }

  PcaResult pca = Pca(stacked, options.variance_target);
  KMeansOptions km;
  km.k = options.clusters;
  km.max_iterations = options.max_iterations;
  km.tolerance = options.tolerance;
  km.seed = options.seed;
  KMeansResult clusters = KMeans(pca.projected, km);

  LatentResult result;
  result.pca_dims = pca.dims;
  result.real_counts.assign(static_cast<size_t>(options.clusters), 0);
  result.cluster_sizes.assign(static_cast<size_t>(options.clusters), 0);
  for (size_t i = 0; i < order.size(); ++i) {
    size_t label = static_cast<size_t>(clusters.labels[i]);
    ++result.cluster_sizes[label];
    if (order[i].first == 0) ++result.real_counts[label];
  }
  double sum = 0.0;
  int nonempty = 0;
  for (size_t c = 0; c < result.cluster_sizes.size(); ++c) {
    if (result.cluster_sizes[c] == 0) continue;
    double fraction = static_cast<double>(result.real_counts[c]) /
                      static_cast<double>(result.cluster_sizes[c]);
    sum += (fraction - 0.5) * (fraction - 0.5);
    ++nonempty;
  }
  result.value = std::log(std::max(sum / nonempty, kLatentFloor));
  return result;
}

KnowledgeRule DeriveKnowledgeRules(const Dataset& real,
                                   std::string_view group_feature, int top_m) {
  const size_t g = real.schema().Require(group_feature);
  if (real.schema()[g].kind != FeatureKind::kBinary) {
    throw Error(ErrorCode::kInvalidArgument,
                "group feature '" + std::string(group_feature) +
                    "' must be binary");
  }
  if (top_m < 0) throw Error(ErrorCode::kInvalidArgument, "top_m must be >= 0");
  auto group = real.column(static_cast<Eigen::Index>(g));
  std::array<int64_t, 2> group_size{};
  for (Eigen::Index r = 0; r < group.size(); ++r) ++group_size[group(r) == 1.0];

  KnowledgeRule rule;
  rule.group_feature = std::string(group_feature);
  for (int value = 0; value < 2; ++value) {
    std::vector<ExclusiveCode> candidates;
    for (size_t c = 0; c < real.schema().size(); ++c) {
      const FeatureSpec& f = real.schema()[c];
      if (c == g || f.kind != FeatureKind::kBinary ||
          f.role != FeatureRole::kFeature) {
        continue;
      }
      auto col = real.column(static_cast<Eigen::Index>(c));
      std::array<int64_t, 2> count{};
      for (Eigen::Index r = 0; r < col.size(); ++r) {
        if (col(r) == 1.0) ++count[group(r) == 1.0];
      }
      if (count[value] > 0 && count[1 - value] == 0) {
        candidates.push_back({f.name, value, count[value],
                              static_cast<double>(count[value]) /
                                  static_cast<double>(group_size[value])});
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const ExclusiveCode& a, const ExclusiveCode& b) {
                if (a.count != b.count) return a.count > b.count;
                return a.code < b.code;
              });
    if (candidates.size() > static_cast<size_t>(top_m)) {
      candidates.resize(static_cast<size_t>(top_m));
    }
    rule.codes.insert(rule.codes.end(), candidates.begin(), candidates.end());
  }
  return rule;
}

KnowledgeResult KnowledgeViolation(const Dataset& synth,
                                   const KnowledgeRule& rule) {
  KnowledgeResult result;
  if (rule.codes.empty()) return result;
  auto group = synth.column(
      static_cast<Eigen::Index>(synth.schema().Require(rule.group_feature)));
  double sum = 0.0;
  int defined = 0;
  for (const ExclusiveCode& code : rule.codes) {
    auto col = synth.column(
        static_cast<Eigen::Index>(synth.schema().Require(code.code)));
    CodeViolation v{code.code, code.group, 0, 0, 0.0};
    const double opposite = code.group == 1 ? 0.0 : 1.0;
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      if (col(r) != 1.0) continue;
      ++v.carriers;
      if (group(r) == opposite) ++v.violations;
    }
    if (v.carriers == 0) {
      v.rate = std::numeric_limits<double>::quiet_NaN();
    } else {
      v.rate = static_cast<double>(v.violations) /
               static_cast<double>(v.carriers);
      sum += v.rate;
      ++defined;
    }
    result.codes.push_back(v);
  }
  if (defined > 0) result.score = sum / defined;
  return result;
}

}  // namespace synbench

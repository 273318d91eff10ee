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

#include "synbench/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "synbench/clustering.h"
#include "synbench/error.h"
#include "synbench/random.h"

namespace synbench {
namespace {

constexpr double kMadScale = 1.48;
constexpr int kDisclosureClusters = 5;

// Row-major copy of selected columns, so each record is contiguous.
std::vector<double> RowMajor(const Dataset& d, std::span<const size_t> cols) {
  std::vector<double> out(static_cast<size_t>(d.rows()) * cols.size());
  for (Eigen::Index r = 0; r < d.rows(); ++r) {
    for (size_t c = 0; c < cols.size(); ++c) {
      out[static_cast<size_t>(r) * cols.size() + c] =
          d.at(r, static_cast<Eigen::Index>(cols[c]));
    }
  }
  return out;
}

double Percentile(const std::vector<double>& sorted, double q) {
  double pos = q * static_cast<double>(sorted.size() - 1);
  size_t lo = static_cast<size_t>(std::floor(pos));
  size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

int64_t RequiredLearnable(double fraction, size_t n_sensitive) {
  return static_cast<int64_t>(
      std::ceil(fraction * static_cast<double>(n_sensitive) - 1e-9));
}

}  // namespace

double F1Score(std::span<const double> predicted,
               std::span<const double> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "predictions and truth differ in length");
  }
  int64_t tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < truth.size(); ++i) {
    bool p = predicted[i] == 1.0;
    bool t = truth[i] == 1.0;
    tp += p && t;
    fp += p && !t;
    fn += !p && t;
  }
  if (tp == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

Interval BootstrapRiskCi(
    size_t n_targets,
    const std::function<double(std::span<const size_t>)>& evaluate,
    double point, int resamples, uint64_t seed) {
  if (resamples < 1 || n_targets == 0) return {point, point};
  Rng rng(seed);
  std::vector<size_t> sample(n_targets);
  std::vector<double> estimates;
  estimates.reserve(static_cast<size_t>(resamples));
  for (int b = 0; b < resamples; ++b) {
    for (size_t& s : sample) s = rng.UniformIndex(n_targets);
    estimates.push_back(evaluate(sample));
  }
  std::sort(estimates.begin(), estimates.end());
  Interval ci{Percentile(estimates, 0.025), Percentile(estimates, 0.975)};
  ci.lo = std::min(ci.lo, point);
  ci.hi = std::max(ci.hi, point);
  return ci;
}

std::vector<std::string> DefaultKnownFeatures(const Dataset& real, int top_f) {
  std::vector<std::string> known;
  for (size_t c : real.schema().IndicesWithRole(FeatureRole::kQuasiIdentifier)) {
    known.push_back(real.schema()[c].name);
  }
  std::vector<std::pair<double, std::string>> binaries;
  for (size_t c = 0; c < real.schema().size(); ++c) {
    const FeatureSpec& f = real.schema()[c];
    if (f.kind == FeatureKind::kBinary && f.role == FeatureRole::kFeature) {
      binaries.emplace_back(real.column(static_cast<Eigen::Index>(c)).sum(),
                            f.name);
    }
  }
  std::sort(binaries.begin(), binaries.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  const size_t take = std::min(binaries.size(),
                               static_cast<size_t>(std::max(top_f, 0)));
  for (size_t i = 0; i < take; ++i) known.push_back(binaries[i].second);
  return known;
}

AttributeRiskReport AttributeInferenceRisk(
    const Dataset& targets, const Dataset& synth, const Dataset& real,
    const AttributeAttackConfig& config) {
  if (!(targets.schema() == synth.schema()) ||
      !(real.schema() == synth.schema())) {
    throw Error(ErrorCode::kSchemaMismatch,
                "attribute inference needs one shared schema");
  }
  if (config.k_neighbors < 1) {
    throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  }
  const Schema& schema = real.schema();
  std::vector<size_t> known;
  std::set<size_t> known_set;
  for (const std::string& name : config.known_features) {
    size_t c = schema.Require(name);
    if (known_set.insert(c).second) known.push_back(c);
  }
  std::vector<size_t> unknown;
  for (size_t c = 0; c < schema.size(); ++c) {
    if (!known_set.contains(c) && schema[c].role != FeatureRole::kOutcome) {
      unknown.push_back(c);
    }
  }
  if (unknown.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "every attribute is known; nothing to infer");
  }

  AttributeRiskReport report;
  double entropy_total = 0.0;
  for (size_t c : unknown) {
    AttributeRisk a;
    a.attribute = schema[c].name;
    a.kind = schema[c].kind;
    a.weight = ColumnEntropy(real, c);
    entropy_total += a.weight;
    report.attributes.push_back(a);
  }
  if (!(entropy_total > 0.0)) {
    throw Error(ErrorCode::kDegenerateWeights,
                "all inferred attributes have zero entropy in the real data");
  }
  for (AttributeRisk& a : report.attributes) a.weight /= entropy_total;

  const size_t n_known = known.size();
  const size_t n_unknown = unknown.size();
  const size_t n_targets = static_cast<size_t>(targets.rows());
  const size_t n_synth = static_cast<size_t>(synth.rows());
  std::vector<double> t_known = RowMajor(targets, known);
  std::vector<double> s_known = RowMajor(synth, known);
  std::vector<double> s_unknown = RowMajor(synth, unknown);
  std::vector<double> t_unknown = RowMajor(targets, unknown);
  const size_t k = std::min(static_cast<size_t>(config.k_neighbors), n_synth);

  // predicted[t * n_unknown + a]
  std::vector<double> predicted(n_targets * n_unknown);
  std::vector<double> dist(n_synth);
  std::vector<size_t> neighbors;
  for (size_t t = 0; t < n_targets; ++t) {
    const double* a = t_known.data() + t * n_known;
    for (size_t s = 0; s < n_synth; ++s) {
      const double* b = s_known.data() + s * n_known;
      double sum = 0.0;
      for (size_t j = 0; j < n_known; ++j) {
        double d = a[j] - b[j];
        sum += d * d;
      }
      dist[s] = sum;
    }
    // Everything tied with the k-th nearest distance votes.
    std::vector<double> sorted = dist;
    std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
    const double kth = sorted[k - 1];
    neighbors.clear();
    for (size_t s = 0; s < n_synth; ++s) {
      if (dist[s] <= kth) neighbors.push_back(s);
    }
    const double count = static_cast<double>(neighbors.size());
    for (size_t u = 0; u < n_unknown; ++u) {
      double sum = 0.0;
      for (size_t s : neighbors) sum += s_unknown[s * n_unknown + u];
      double value;
      if (report.attributes[u].kind == FeatureKind::kBinary) {
        double ones = sum;
        double zeros = count - sum;
        if (ones == zeros) ++report.attributes[u].vote_ties;
        value = ones > zeros ? 1.0 : 0.0;
      } else {
        value = sum / count;
      }
      predicted[t * n_unknown + u] = value;
    }
  }

  auto attribute_risk = [&](size_t u, std::span<const size_t> rows) {
    if (report.attributes[u].kind == FeatureKind::kBinary) {
      int64_t tp = 0, fp = 0, fn = 0;
      for (size_t t : rows) {
        bool p = predicted[t * n_unknown + u] == 1.0;
        bool y = t_unknown[t * n_unknown + u] == 1.0;
        tp += p && y;
        fp += p && !y;
        fn += !p && y;
      }
      return tp == 0 ? 0.0
                     : 2.0 * static_cast<double>(tp) /
                           static_cast<double>(2 * tp + fp + fn);
    }
    int64_t close = 0;
    for (size_t t : rows) {
      close += std::abs(predicted[t * n_unknown + u] -
                        t_unknown[t * n_unknown + u]) <=
               config.closeness_threshold;
    }
    return static_cast<double>(close) / static_cast<double>(rows.size());
  };
  auto evaluate = [&](std::span<const size_t> rows) {
    double risk = 0.0;
    for (size_t u = 0; u < n_unknown; ++u) {
      risk += report.attributes[u].weight * attribute_risk(u, rows);
    }
    return risk;
  };

  std::vector<size_t> all(n_targets);
  std::iota(all.begin(), all.end(), 0);
  report.risk = 0.0;
  for (size_t u = 0; u < n_unknown; ++u) {
    AttributeRisk& a = report.attributes[u];
    a.risk = attribute_risk(u, all);
    report.risk += a.weight * a.risk;
  }
  report.ci = BootstrapRiskCi(n_targets, evaluate, report.risk,
                              config.bootstrap_resamples, config.seed);
  return report;
}

std::vector<double> NearestDistances(const Dataset& targets,
                                     const Dataset& synth) {
  if (!(targets.schema() == synth.schema())) {
    throw Error(ErrorCode::kSchemaMismatch,
                "membership targets and synthetic data differ in schema");
  }
  std::vector<size_t> cols(targets.schema().size());
  std::iota(cols.begin(), cols.end(), 0);
  const size_t p = cols.size();
  std::vector<double> t = RowMajor(targets, cols);
  std::vector<double> s = RowMajor(synth, cols);
  const size_t n_t = static_cast<size_t>(targets.rows());
  const size_t n_s = static_cast<size_t>(synth.rows());
  std::vector<double> out(n_t);
  for (size_t i = 0; i < n_t; ++i) {
    const double* a = t.data() + i * p;
    double best = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < n_s; ++j) {
      const double* b = s.data() + j * p;
      double sum = 0.0;
      for (size_t c = 0; c < p && sum < best; ++c) {
        double d = a[c] - b[c];
        sum += d * d;
      }
      best = std::min(best, sum);
    }
    out[i] = std::sqrt(best);
  }
  return out;
}

double MembershipF1(std::span<const double> distances,
                    std::span<const double> membership, double threshold) {
  std::vector<double> predicted(distances.size());
  for (size_t i = 0; i < distances.size(); ++i) {
    predicted[i] = distances[i] < threshold ? 1.0 : 0.0;
  }
  return F1Score(predicted, membership);
}

MembershipRiskReport MembershipInferenceRisk(
    const Dataset& members, const Dataset& non_members, const Dataset& synth,
    const MembershipAttackConfig& config) {
  if (!(config.distance_threshold > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be positive");
  }
  Dataset targets = ConcatRows(members, non_members);
  std::vector<double> distances = NearestDistances(targets, synth);
  std::vector<double> labels(distances.size(), 0.0);
  std::fill(labels.begin(), labels.begin() + members.rows(), 1.0);

  MembershipRiskReport report;
  report.risk = MembershipF1(distances, labels, config.distance_threshold);
  int64_t tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < distances.size(); ++i) {
    bool p = distances[i] < config.distance_threshold;
    tp += p && labels[i] == 1.0;
    fp += p && labels[i] == 0.0;
    fn += !p && labels[i] == 1.0;
  }
  report.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
  report.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);

  auto evaluate = [&](std::span<const size_t> rows) {
    std::vector<double> d, y;
    d.reserve(rows.size());
    y.reserve(rows.size());
    for (size_t r : rows) {
      d.push_back(distances[r]);
      y.push_back(labels[r]);
    }
    return MembershipF1(d, y, config.distance_threshold);
  };
  report.ci = BootstrapRiskCi(distances.size(), evaluate, report.risk,
                              config.bootstrap_resamples, config.seed);
  return report;
}

double MedianAbsoluteDeviation(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kEmptySample, "MAD of an empty sample");
  }
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
  };
  std::vector<double> v(values.begin(), values.end());
  double m = median(v);
  for (double& x : v) x = std::abs(x - m);
  return median(std::move(v));
}

double DisclosureLambda(const DisclosureConfig& config, size_t record) {
  Rng rng(MixSeed(config.seed, static_cast<uint64_t>(record)));
  double a = rng.Triangular(config.verification.min, config.verification.mode,
                            config.verification.max);
  double b = rng.Triangular(config.data_error.min, config.data_error.mode,
                            config.data_error.max);
  return a * b;
}

DisclosureRiskReport IdentityDisclosureRisk(const Dataset& synth,
                                            const Dataset& real,
                                            const Dataset& population,
                                            const DisclosureConfig& config) {
  if (!(real.schema() == synth.schema())) {
    throw Error(ErrorCode::kSchemaMismatch,
                "real and synthetic datasets differ in schema");
  }
  if (!(config.learn_fraction > 0.0 && config.learn_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "L must lie in (0,1]");
  }
  if (config.qids.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no quasi-identifiers configured");
  }
  const Schema& schema = real.schema();
  std::vector<size_t> qid_real, qid_pop;
  std::vector<double> widths;
  std::set<size_t> qid_set;
  for (const std::string& q : config.qids) {
    qid_real.push_back(schema.Require(q));
    qid_pop.push_back(population.schema().Require(q));
    qid_set.insert(qid_real.back());
    auto it = config.generalization.find(q);
    widths.push_back(it == config.generalization.end() ? 0.0 : it->second);
  }
  std::vector<size_t> sensitive;
  for (size_t c = 0; c < schema.size(); ++c) {
    if (!qid_set.contains(c)) sensitive.push_back(c);
  }
  if (sensitive.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no sensitive attributes");
  }

  using Key = std::vector<double>;
  auto key_of = [&](const Dataset& d, Eigen::Index r,
                    const std::vector<size_t>& cols) {
    Key key(cols.size());
    for (size_t i = 0; i < cols.size(); ++i) {
      double v = d.at(r, static_cast<Eigen::Index>(cols[i]));
      key[i] = widths[i] > 0.0 ? std::floor(v / widths[i]) : v;
    }
    return key;
  };

  std::map<Key, int64_t> real_counts, pop_counts;
  std::map<Key, std::vector<Eigen::Index>> synth_groups;
  std::vector<Key> real_keys;
  for (Eigen::Index r = 0; r < real.rows(); ++r) {
    real_keys.push_back(key_of(real, r, qid_real));
    ++real_counts[real_keys.back()];
  }
  for (Eigen::Index r = 0; r < population.rows(); ++r) {
    ++pop_counts[key_of(population, r, qid_pop)];
  }
  for (Eigen::Index r = 0; r < synth.rows(); ++r) {
    synth_groups[key_of(synth, r, qid_real)].push_back(r);
  }

  // Per sensitive attribute: value proportions (binary) or cluster shares
  // and MAD (continuous).
  const double n = static_cast<double>(real.rows());
  struct AttributeStats {
    bool binary = true;
    double share_of_one = 0.0;
    std::vector<double> cluster_share;  // per real record
    double mad = 0.0;
  };
  std::vector<AttributeStats> stats;
  for (size_t c : sensitive) {
    AttributeStats s;
    auto col = real.column(static_cast<Eigen::Index>(c));
    if (schema[c].kind == FeatureKind::kBinary) {
      s.share_of_one = col.sum() / n;
    } else {
      s.binary = false;
      std::vector<double> v(col.data(), col.data() + col.size());
      KMeans1DResult km = OptimalKMeans1D(v, kDisclosureClusters);
      s.cluster_share.resize(v.size());
      for (size_t i = 0; i < v.size(); ++i) {
        s.cluster_share[i] =
            static_cast<double>(km.sizes[static_cast<size_t>(km.labels[i])]) / n;
      }
      s.mad = MedianAbsoluteDeviation(v);
    }
    stats.push_back(std::move(s));
  }

  const int64_t required = RequiredLearnable(config.learn_fraction,
                                             sensitive.size());
  DisclosureRiskReport report;
  report.population_size = population.rows();
  std::vector<double> sample_part(static_cast<size_t>(real.rows()));
  std::vector<double> population_part(static_cast<size_t>(real.rows()));
  for (Eigen::Index r = 0; r < real.rows(); ++r) {
    DisclosureRecord rec;
    const Key& key = real_keys[static_cast<size_t>(r)];
    rec.f = real_counts.at(key);
    auto pop = pop_counts.find(key);
    if (pop == pop_counts.end()) {
      throw Error(ErrorCode::kPopulationCoverage,
                  "real record " + std::to_string(r) +
                      " has no quasi-identifier match in the population");
    }
    rec.big_f = pop->second;
    rec.lambda = DisclosureLambda(config, static_cast<size_t>(r));
    auto group = synth_groups.find(key);
    rec.matched = group != synth_groups.end();
    if (rec.matched) {
      for (size_t a = 0; a < sensitive.size(); ++a) {
        const Eigen::Index c = static_cast<Eigen::Index>(sensitive[a]);
        const double x = real.at(r, c);
        const AttributeStats& s = stats[a];
        bool learnable = false;
        if (s.binary) {
          double p_j = x == 1.0 ? s.share_of_one : 1.0 - s.share_of_one;
          if (p_j < 0.5) {
            for (Eigen::Index t : group->second) {
              if (synth.at(t, c) == x) {
                learnable = true;
                break;
              }
            }
          }
        } else {
          double best = std::numeric_limits<double>::infinity();
          for (Eigen::Index t : group->second) {
            best = std::min(best, std::abs(x - synth.at(t, c)));
          }
          learnable = s.cluster_share[static_cast<size_t>(r)] * best <
                      kMadScale * s.mad;
        }
        rec.learnable_attributes += learnable;
      }
      rec.learned = rec.learnable_attributes >= required;
    }
    double factor = rec.matched && rec.learned ? (1.0 + rec.lambda) / 2.0 : 0.0;
    sample_part[static_cast<size_t>(r)] = factor / static_cast<double>(rec.f);
    population_part[static_cast<size_t>(r)] =
        factor / static_cast<double>(rec.big_f);
    report.records.push_back(rec);
  }

  const double big_n = static_cast<double>(population.rows());
  auto evaluate = [&](std::span<const size_t> rows) {
    double a = 0.0, b = 0.0;
    for (size_t i : rows) {
      a += sample_part[i];
      b += population_part[i];
    }
    return std::max(a / big_n, b / static_cast<double>(rows.size()));
  };
  double a = 0.0, b = 0.0;
  for (size_t i = 0; i < sample_part.size(); ++i) {
    a += sample_part[i];
    b += population_part[i];
  }
  report.sample_term = a / big_n;
  report.population_term = b / n;
  report.risk = std::max(report.sample_term, report.population_term);
  report.ci = BootstrapRiskCi(sample_part.size(), evaluate, report.risk,
                              config.bootstrap_resamples,
                              MixSeed(config.seed, {0xd15c, 1}));
  return report;
}

}  // namespace synbench

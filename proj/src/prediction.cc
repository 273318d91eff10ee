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

#include "synbench/prediction.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "synbench/error.h"
#include "synbench/random.h"

namespace synbench {
namespace {

constexpr int kMaxRedraws = 1000;

bool HasBothClasses(std::span<const double> labels) {
  bool pos = false, neg = false;
  for (double y : labels) {
    (y == 1.0 ? pos : neg) = true;
    if (pos && neg) return true;
  }
  return false;
}

std::span<const double> AsSpan(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<size_t>(v.size())};
}

double Softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double Percentile(const std::vector<double>& sorted, double q) {
  double pos = q * static_cast<double>(sorted.size() - 1);
  size_t lo = static_cast<size_t>(std::floor(pos));
  size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

std::vector<std::string> PredictorNames(const Schema& schema) {
  std::vector<std::string> names;
  for (size_t c : PredictorColumns(schema)) names.push_back(schema[c].name);
  return names;
}

std::vector<FeatureImportance> ZeroImportances(const Schema& schema) {
  std::vector<FeatureImportance> out;
  for (const std::string& name : PredictorNames(schema)) {
    out.push_back({name, 0.0});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.feature < b.feature; });
  return out;
}

void RequireOutcome(const Dataset& d) {
  if (!d.schema().OutcomeIndex()) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset '" + d.tag().Id() + "' has no outcome column");
  }
}

// Shared body of TSTR and TRTS: fit on `train`, evaluate on `test`.
// `synthetic_train` says which side may be degenerate.
PredictionReport Evaluate(const Dataset& train, const Dataset& test,
                          bool synthetic_train, const Classifier& classifier,
                          const PredictionOptions& options, uint64_t seed) {
  RequireOutcome(train);
  RequireOutcome(test);
  if (!(train.schema() == test.schema())) {
    throw Error(ErrorCode::kSchemaMismatch,
                "training and test datasets have different schemas");
  }
  PredictionReport report;
  report.direction = synthetic_train ? PredictionDirection::kTstr
                                     : PredictionDirection::kTrts;
  Eigen::MatrixXd x_train = PredictorMatrix(train);
  Eigen::VectorXd y_train = OutcomeVector(train);
  Eigen::MatrixXd x_test = PredictorMatrix(test);
  Eigen::VectorXd y_test = OutcomeVector(test);

  const Dataset& real = synthetic_train ? test : train;
  const Eigen::VectorXd& y_real = synthetic_train ? y_test : y_train;
  const Eigen::VectorXd& y_synth = synthetic_train ? y_train : y_test;
  if (!HasBothClasses(AsSpan(y_real))) {
    throw Error(ErrorCode::kSingleClass,
                "real dataset '" + real.tag().Id() + "' has a single label");
  }
  if (!HasBothClasses(AsSpan(y_synth))) {
    report.degenerate = true;
    if (options.compute_importance && synthetic_train) {
      report.importances = ZeroImportances(train.schema());
    }
    if (!synthetic_train && options.compute_importance) {
      auto model = classifier.Fit(x_train, y_train, seed);
      report.importances =
          PermutationImportance(*model, x_train, y_train,
                                PredictorNames(train.schema()),
                                options.importance_repeats, MixSeed(seed, 2));
    }
    return report;
  }

  auto model = classifier.Fit(x_train, y_train, seed);
  Eigen::VectorXd scores = model->Score(x_test);
  report.auroc = Auroc(AsSpan(scores), AsSpan(y_test));
  report.ci = BootstrapAurocCi(AsSpan(scores), AsSpan(y_test),
                               options.bootstrap_resamples, MixSeed(seed, 1));
  if (options.compute_importance) {
    report.importances = PermutationImportance(
        *model, x_train, y_train, PredictorNames(train.schema()),
        options.importance_repeats, MixSeed(seed, 2));
  }
  return report;
}

}  // namespace

double Auroc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "scores and labels differ in length");
  }
  const size_t n = scores.size();
  int64_t positives = 0;
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) {
      throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    }
    positives += y == 1.0;
  }
  const int64_t negatives = static_cast<int64_t>(n) - positives;
  if (positives == 0 || negatives == 0) {
    throw Error(ErrorCode::kSingleClass, "AUROC needs both labels");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });
  // Sum of midranks of the positives (ranks start at 1).
  double rank_sum = 0.0;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    int64_t tied_pos = 0;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      tied_pos += labels[order[j]] == 1.0;
      ++j;
    }
    double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2;
    rank_sum += midrank * static_cast<double>(tied_pos);
    i = j;
  }
  const double p = static_cast<double>(positives);
  const double u = rank_sum - p * (p + 1.0) / 2.0;
  return u / (p * static_cast<double>(negatives));
}

Interval BootstrapAurocCi(std::span<const double> scores,
                          std::span<const double> labels, int resamples,
                          uint64_t seed) {
  const double point = Auroc(scores, labels);
  if (resamples < 1) return {point, point};
  const size_t n = scores.size();
  Rng rng(seed);
  std::vector<double> s(n), y(n);
  std::vector<double> estimates;
  estimates.reserve(static_cast<size_t>(resamples));
  for (int b = 0; b < resamples; ++b) {
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
      for (size_t i = 0; i < n; ++i) {
        size_t k = rng.UniformIndex(n);
        s[i] = scores[k];
        y[i] = labels[k];
      }
      if (HasBothClasses(y)) {
        estimates.push_back(Auroc(s, y));
        break;
      }
    }
  }
  if (estimates.empty()) return {point, point};
  std::sort(estimates.begin(), estimates.end());
  Interval ci{Percentile(estimates, 0.025), Percentile(estimates, 0.975)};
  ci.lo = std::min(ci.lo, point);
  ci.hi = std::max(ci.hi, point);
  return ci;
}

Eigen::VectorXd LinearModel::Score(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd z = x * weights_;
  z.array() += intercept_;
  return z;
}

std::unique_ptr<ScoringModel> LogisticRegression::Fit(
    const Eigen::MatrixXd& x, const Eigen::VectorXd& y, uint64_t) const {
  if (x.rows() != y.size() || x.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad training data shape");
  }
  if (!HasBothClasses(AsSpan(y))) {
    throw Error(ErrorCode::kSingleClass, "training labels hold a single class");
  }
  const Eigen::Index p = x.cols();
  const double n = static_cast<double>(x.rows());
  const double lambda = options_.lambda;
  // theta = (w, b).
  Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
  double b = 0.0;

  auto loss = [&](const Eigen::VectorXd& w_, double b_) {
    Eigen::VectorXd z = x * w_;
    double total = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      double zi = z(i) + b_;
      total += Softplus(zi) - y(i) * zi;
    }
    return total / n + 0.5 * lambda * w_.squaredNorm();
  };

  double step = 1.0;
  double current = loss(w, b);
  for (int iter = 0; iter < options_.max_iterations; ++iter) {
    Eigen::VectorXd z = x * w;
    Eigen::VectorXd residual(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      residual(i) = Sigmoid(z(i) + b) - y(i);
    }
    Eigen::VectorXd grad_w = x.transpose() * residual / n + lambda * w;
    double grad_b = residual.mean();
    double grad_sq = grad_w.squaredNorm() + grad_b * grad_b;
    if (std::max(grad_w.cwiseAbs().maxCoeff(), std::abs(grad_b)) <
        options_.gradient_tolerance) {
      break;
    }
    double next = current;
    Eigen::VectorXd w_next;
    double b_next = b;
    while (true) {
      w_next = w - step * grad_w;
      b_next = b - step * grad_b;
      next = loss(w_next, b_next);
      if (next <= current - 0.5 * step * grad_sq || step < 1e-12) break;
      step *= 0.5;
    }
    if (!(next <= current)) break;
    w = std::move(w_next);
    b = b_next;
    current = next;
    step *= 2.0;
  }
  return std::make_unique<LinearModel>(std::move(w), b);
}

std::vector<FeatureImportance> PermutationImportance(
    const ScoringModel& model, const Eigen::MatrixXd& x,
    const Eigen::VectorXd& y, std::span<const std::string> names, int repeats,
    uint64_t seed) {
  if (static_cast<size_t>(x.cols()) != names.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature names do not match the matrix");
  }
  if (repeats < 1) {
    throw Error(ErrorCode::kInvalidArgument, "repeats must be >= 1");
  }
  const double base = Auroc(AsSpan(model.Score(x)), AsSpan(y));
  std::vector<FeatureImportance> out;
  Eigen::MatrixXd work = x;
  std::vector<Eigen::Index> perm(static_cast<size_t>(x.rows()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    Rng rng(MixSeed(seed, static_cast<uint64_t>(j)));
    double drop = 0.0;
    for (int r = 0; r < repeats; ++r) {
      std::iota(perm.begin(), perm.end(), 0);
      rng.Shuffle(perm.begin(), perm.end());
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        work(i, j) = x(perm[static_cast<size_t>(i)], j);
      }
      drop += base - Auroc(AsSpan(model.Score(work)), AsSpan(y));
    }
    work.col(j) = x.col(j);
    out.push_back({names[static_cast<size_t>(j)], drop / repeats});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.importance != b.importance) return a.importance > b.importance;
    return a.feature < b.feature;
  });
  return out;
}

int FeatureOverlap(std::span<const std::string> a,
                   std::span<const std::string> b, int m) {
  if (m < 0 || static_cast<size_t>(m) > a.size() ||
      static_cast<size_t>(m) > b.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "M = " + std::to_string(m) + " exceeds a ranking's length");
  }
  std::set<std::string_view> top(a.begin(), a.begin() + m);
  int shared = 0;
  for (int i = 0; i < m; ++i) shared += top.contains(b[static_cast<size_t>(i)]);
  return shared;
}

std::vector<std::string> PredictionReport::RankedFeatures() const {
  std::vector<std::string> out;
  for (const FeatureImportance& f : importances) out.push_back(f.feature);
  return out;
}

PredictionReport EvaluateTstr(const Dataset& synth_train,
                              const Dataset& real_holdout,
                              const Classifier& classifier,
                              const PredictionOptions& options,
                              uint64_t seed) {
  return Evaluate(synth_train, real_holdout, true, classifier, options, seed);
}

PredictionReport EvaluateTrts(const Dataset& real_train,
                              const Dataset& synth_test,
                              const Classifier& classifier,
                              const PredictionOptions& options,
                              uint64_t seed) {
  return Evaluate(real_train, synth_test, false, classifier, options, seed);
}

int CalibrateTopM(const Dataset& real_train, const Dataset& real_holdout,
                  const Classifier& classifier, double retain, uint64_t seed,
                  int importance_repeats) {
  PredictionOptions options;
  options.bootstrap_resamples = 0;
  options.importance_repeats = importance_repeats;
  PredictionReport full =
      EvaluateTrts(real_train, real_holdout, classifier, options, seed);
  const int p = static_cast<int>(full.importances.size());
  const double bar = retain * full.auroc;

  Eigen::MatrixXd x_train = PredictorMatrix(real_train);
  Eigen::VectorXd y_train = OutcomeVector(real_train);
  Eigen::MatrixXd x_test = PredictorMatrix(real_holdout);
  Eigen::VectorXd y_test = OutcomeVector(real_holdout);
  std::vector<std::string> names = PredictorNames(real_train.schema());
  std::vector<Eigen::Index> ranked;
  for (const FeatureImportance& f : full.importances) {
    ranked.push_back(static_cast<Eigen::Index>(
        std::find(names.begin(), names.end(), f.feature) - names.begin()));
  }
  for (int m = 1; m <= p; ++m) {
    Eigen::MatrixXd a(x_train.rows(), m), b(x_test.rows(), m);
    for (int i = 0; i < m; ++i) {
      a.col(i) = x_train.col(ranked[static_cast<size_t>(i)]);
      b.col(i) = x_test.col(ranked[static_cast<size_t>(i)]);
    }
    auto model = classifier.Fit(a, y_train, seed);
    if (Auroc(AsSpan(model->Score(b)), AsSpan(y_test)) >= bar) return m;
  }
  return p;
}

Eigen::MatrixXd PredictorMatrix(const Dataset& d) {
  std::vector<size_t> cols = PredictorColumns(d.schema());
  Eigen::MatrixXd out(d.rows(), static_cast<Eigen::Index>(cols.size()));
  for (size_t i = 0; i < cols.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) =
        d.column(static_cast<Eigen::Index>(cols[i]));
  }
  return out;
}

Eigen::VectorXd OutcomeVector(const Dataset& d) {
  auto outcome = d.schema().OutcomeIndex();
  if (!outcome) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset '" + d.tag().Id() + "' has no outcome column");
  }
  return d.column(static_cast<Eigen::Index>(*outcome));
}

}  // namespace synbench

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

// Train-on-synthetic/test-on-real (and the reverse) model performance, with a
// pluggable classifier and permutation feature importance.

#ifndef SYNBENCH_PREDICTION_H_
#define SYNBENCH_PREDICTION_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "synbench/dataset.h"

namespace synbench {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Probability that a random positive outscores a random negative, ties
// counted one half. Throws kSingleClass unless both labels occur.
double Auroc(std::span<const double> scores, std::span<const double> labels);

// Percentile (2.5%, 97.5%) bootstrap interval over resampled (score, label)
// pairs. Single-class resamples are redrawn. The interval is widened if
// needed so that it contains the full-sample AUROC.
Interval BootstrapAurocCi(std::span<const double> scores,
                          std::span<const double> labels, int resamples,
                          uint64_t seed);

class ScoringModel {
 public:
  virtual ~ScoringModel() = default;
  // Higher scores mean "more likely positive".
  virtual Eigen::VectorXd Score(const Eigen::MatrixXd& x) const = 0;
};

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::string name() const = 0;
  // Must be deterministic in (x, y, seed).
  virtual std::unique_ptr<ScoringModel> Fit(const Eigen::MatrixXd& x,
                                            const Eigen::VectorXd& y,
                                            uint64_t seed) const = 0;
};

// L2-regularized logistic regression fitted by full-batch gradient descent
// with backtracking line search. The intercept is not penalized.
class LogisticRegression : public Classifier {
 public:
  struct Options {
    double lambda = 1e-3;
    int max_iterations = 500;
    double gradient_tolerance = 1e-7;
  };

  LogisticRegression() = default;
  explicit LogisticRegression(Options options) : options_(options) {}

  std::string name() const override { return "logistic_regression"; }
  std::unique_ptr<ScoringModel> Fit(const Eigen::MatrixXd& x,
                                    const Eigen::VectorXd& y,
                                    uint64_t seed) const override;

 private:
  Options options_;
};

class LinearModel : public ScoringModel {
 public:
  LinearModel(Eigen::VectorXd weights, double intercept)
      : weights_(std::move(weights)), intercept_(intercept) {}
  Eigen::VectorXd Score(const Eigen::MatrixXd& x) const override;
  const Eigen::VectorXd& weights() const { return weights_; }
  double intercept() const { return intercept_; }

 private:
  Eigen::VectorXd weights_;
  double intercept_;
};

struct FeatureImportance {
  std::string feature;
  double importance = 0.0;
};

// Mean AUROC drop over `repeats` random permutations of each column, ranked
// by descending drop with ties by name.
std::vector<FeatureImportance> PermutationImportance(
    const ScoringModel& model, const Eigen::MatrixXd& x,
    const Eigen::VectorXd& y, std::span<const std::string> names, int repeats,
    uint64_t seed);

// |top-m(a) intersect top-m(b)|.
int FeatureOverlap(std::span<const std::string> a,
                   std::span<const std::string> b, int m);

enum class PredictionDirection { kTstr, kTrts };

struct PredictionOptions {
  int bootstrap_resamples = 1000;
  int importance_repeats = 5;
  bool compute_importance = true;
};

struct PredictionReport {
  PredictionDirection direction = PredictionDirection::kTstr;
  double auroc = 0.5;
  Interval ci{0.5, 0.5};
  // Set when the synthetic side holds a single label; AUROC is then 0.5.
  bool degenerate = false;
  // Importance ranking of the model's features on its own training data.
  std::vector<FeatureImportance> importances;

  std::vector<std::string> RankedFeatures() const;
};

// Features are all non-outcome columns. Both datasets need the outcome.
PredictionReport EvaluateTstr(const Dataset& synth_train,
                              const Dataset& real_holdout,
                              const Classifier& classifier,
                              const PredictionOptions& options, uint64_t seed);
PredictionReport EvaluateTrts(const Dataset& real_train,
                              const Dataset& synth_test,
                              const Classifier& classifier,
                              const PredictionOptions& options, uint64_t seed);

// Smallest M whose top-M feature subset (by the real model's importance),
// refitted, reaches `retain` times the full model's holdout AUROC. Falls back
// to the full feature count.
int CalibrateTopM(const Dataset& real_train, const Dataset& real_holdout,
                  const Classifier& classifier, double retain, uint64_t seed,
                  int importance_repeats = 5);

// Feature matrix (non-outcome columns) and label vector of a dataset.
Eigen::MatrixXd PredictorMatrix(const Dataset& d);
Eigen::VectorXd OutcomeVector(const Dataset& d);

}  // namespace synbench

#endif  // SYNBENCH_PREDICTION_H_

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

// End-to-end pipeline: generate or ingest candidate datasets, evaluate every
// metric on the kept ones, rank, and score each use-case profile.

#ifndef SYNBENCH_BENCHMARK_H_
#define SYNBENCH_BENCHMARK_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "synbench/dataset.h"
#include "synbench/error.h"
#include "synbench/prediction.h"
#include "synbench/privacy.h"
#include "synbench/ranking.h"
#include "synbench/utility_metrics.h"

namespace synbench {

std::string_view Version();

struct GeneratorSpec {
  std::string name;
  // The built-in marginal sampler; otherwise `datasets` lists CSV files.
  bool builtin_baseline = false;
  std::vector<std::filesystem::path> datasets;
};

struct MetricParams {
  int clusters = 3;
  double variance_target = 0.8;
  int k_neighbors = 1;
  int known_top_f = 256;
  // Overrides the QIDs + top-F default when set.
  std::optional<std::vector<std::string>> known_features;
  double closeness = 0.1;
  double theta = 2.0;
  double learn_fraction = 0.01;
  TriangularParams lambda_verification;
  TriangularParams lambda_data_error;
  int bootstrap = 1000;
  int risk_bootstrap = 200;
  int importance_repeats = 5;
  // Calibrated from the real data when empty.
  std::optional<int> top_m;
  double retain = 0.9;
  // Knowledge violation is undefined for every dataset when empty.
  std::string knowledge_group;
  int knowledge_top_m = 3;
  // Defaults to the schema's qid columns.
  std::optional<std::vector<std::string>> qids;
  std::map<std::string, double> generalization;
};

struct BenchmarkConfig {
  std::filesystem::path real_data;
  std::filesystem::path real_schema;
  // Pre-split alternative to real_data.
  std::filesystem::path real_train;
  std::filesystem::path real_eval;
  // Defaults to the full real data.
  std::filesystem::path population;
  std::filesystem::path population_schema;
  MissingPolicy missing = MissingPolicy::kReject;

  std::vector<GeneratorSpec> generators;
  int candidate_count = 5;
  int keep_count = 3;
  Paradigm paradigm = Paradigm::kCombined;
  double split_ratio = 0.7;
  bool stratify = true;
  int64_t min_feature_count = 20;
  MetricParams metrics;
  std::vector<WeightProfile> profiles;
  uint64_t seed = 0;
  int workers = 1;
  std::filesystem::path output_dir = "bench_out";
  // Phase 3 (ranking and profiles) can be skipped.
  bool rank = true;

  // Throws kConfig on inconsistent settings.
  void Validate() const;
};

// Relative paths in the JSON are resolved against `base_dir`.
BenchmarkConfig ParseConfig(std::string_view json_text,
                            const std::filesystem::path& base_dir);
BenchmarkConfig LoadConfig(const std::filesystem::path& path);
// A config file with every default spelled out.
std::string ConfigTemplate();

// Named sensitivity settings: "k10", "f1024", "theta5", "l0.001".
void ApplySweep(BenchmarkConfig& config, std::string_view setting);
std::vector<std::string> SweepSettings();

struct CandidateInfo {
  std::string model;
  std::string dataset;
  int run = 0;
  double dwd = 0.0;
  bool kept = false;
};

struct MetricRecord {
  std::string model;
  std::string dataset;
  int run = 0;
  Paradigm paradigm = Paradigm::kCombined;
  MetricId metric = MetricId::kDwd;
  std::optional<double> value;
  std::optional<Interval> ci;
  bool degenerate = false;
  std::string note;
};

struct PrevalencePoint {
  std::string dataset;
  std::string feature;
  double real = 0.0;
  double synthetic = 0.0;
};

struct ProfileResult {
  WeightProfile profile;
  std::vector<FinalScore> ranking;
};

struct BenchmarkFailure {
  std::string generator;
  std::string dataset;
  int run = 0;
  std::string metric;
  ErrorCode code = ErrorCode::kInvalidArgument;
  std::string message;
};

struct BenchmarkReport {
  std::string config_json;
  int64_t real_rows = 0;
  int64_t train_rows = 0;
  int64_t eval_rows = 0;
  std::vector<std::string> dropped_features;
  int top_m = 0;
  bool top_m_calibrated = false;
  // Real-train / real-eval reference AUROC.
  std::optional<double> reference_auroc;
  Interval reference_ci;
  KnowledgeRule knowledge_rule;
  std::vector<CandidateInfo> candidates;
  std::vector<MetricRecord> records;
  // Per-code violation rates keyed by dataset id.
  std::map<std::string, std::vector<CodeViolation>> knowledge_codes;
  std::map<MetricId, MetricRanking> rankings;
  RankScores rank_scores;
  std::map<MetricId, std::map<std::string, std::optional<double>>> mean_values;
  std::vector<ProfileResult> profiles;
  Eigen::MatrixXd metric_correlation;
  std::vector<PrevalencePoint> prevalence;
  std::vector<std::string> notes;
  std::map<std::string, double> timing_seconds;
  std::optional<BenchmarkFailure> failure;
};

// Runs all three phases. Loading and configuration problems throw. Metric
// failures do not: the first one (in dataset, metric order) is returned in
// `failure` next to every result that did succeed, and ranking is skipped.
BenchmarkReport RunBenchmark(const BenchmarkConfig& config);

// Phase 1 only: writes each generated or ingested candidate as CSV plus
// schema sidecar under `dir`. Returns the written paths.
std::vector<std::filesystem::path> GenerateCandidates(
    const BenchmarkConfig& config, const std::filesystem::path& dir);

// Deterministic JSON; wall-clock timing is not part of it.
std::string ReportToJson(const BenchmarkReport& report);
std::string TimingToJson(const BenchmarkReport& report);

// report.json, timing.json, tables/*.csv and plots/*.csv under `dir`.
void WriteReport(const BenchmarkReport& report,
                 const std::filesystem::path& dir);

// Infers (model, run, paradigm) from "<model>__run<k>__<paradigm>.csv";
// otherwise the file stem is the model and run is 1.
Provenance ProvenanceFromFileName(const std::filesystem::path& path,
                                  Paradigm fallback);

}  // namespace synbench

#endif  // SYNBENCH_BENCHMARK_H_

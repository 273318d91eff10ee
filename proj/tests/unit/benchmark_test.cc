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

#include "synbench/benchmark.h"

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "csv.h"
#include "fixtures.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "synbench/error.h"

namespace synbench {
namespace {

namespace fs = std::filesystem;

constexpr char kSmallMetrics[] = R"(
  "metrics": {"bootstrap": 50, "risk_bootstrap": 20, "importance_repeats": 2,
              "top_m": 5, "knowledge_group": "sex", "known_top_f": 8,
              "generalization": {"age": 10}})";

// Writes real.csv (+ schema) into `dir` and returns its path.
fs::path WriteReal(const fs::path& dir, int64_t rows, uint64_t seed = 1) {
  testing::FixtureOptions o;
  o.rows = rows;
  o.seed = seed;
  Dataset d = testing::MakeEhrFixture(o);
  fs::path path = dir / "real.csv";
  WriteDataset(d, path);
  WriteSchema(d.schema(), SchemaSidecarPath(path));
  return path;
}

std::string BaselineConfig(const std::string& extra = "") {
  return std::string(R"({
    "real": {"data": "real.csv"},
    "generators": [{"name": "Baseline", "builtin": "baseline"}],
    "candidate_count": 3, "keep_count": 2, "min_feature_count": 5,)") +
         kSmallMetrics + extra + "}";
}

TEST(ConfigTest, DefaultsAndRelativePaths) {
  BenchmarkConfig c = ParseConfig(BaselineConfig(), "/data/run");
  EXPECT_EQ(c.real_data, fs::path("/data/run/real.csv"));
  EXPECT_EQ(c.candidate_count, 3);
  EXPECT_EQ(c.keep_count, 2);
  EXPECT_EQ(c.profiles.size(), 3u);
  EXPECT_EQ(c.metrics.top_m, 5);
  EXPECT_EQ(c.metrics.generalization.at("age"), 10.0);
  EXPECT_EQ(c.output_dir, fs::path("/data/run/bench_out"));
  EXPECT_TRUE(c.generators[0].builtin_baseline);
}

TEST(ConfigTest, RejectsUnknownKeysAndBadCounts) {
  EXPECT_THROW(ParseConfig(BaselineConfig(R"(, "bogus": 1)"), "."), Error);
  EXPECT_THROW(ParseConfig(R"({"real": {"data": "x.csv"}, "generators": []})", "."),
               Error);
  EXPECT_THROW(ParseConfig(BaselineConfig(R"(, "profiles": ["Nope"])"), "."), Error);
  try {
    ParseConfig(R"({"real": {"data": "x.csv"},
                    "generators": [{"name": "B", "builtin": "baseline"}],
                    "candidate_count": 2, "keep_count": 3})",
                ".");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kConfig);
  }
  EXPECT_THROW(ParseConfig("{not json", "."), Error);
}

TEST(ConfigTest, InlineProfilesAndTemplateParses) {
  BenchmarkConfig c = ParseConfig(
      BaselineConfig(R"(, "profiles": ["Education",
        {"name": "DWD only", "weights": {"dwd": 1}}])"),
      ".");
  ASSERT_EQ(c.profiles.size(), 2u);
  EXPECT_EQ(c.profiles[1].name, "DWD only");
  BenchmarkConfig t = ParseConfig(ConfigTemplate(), ".");
  EXPECT_EQ(t.generators.size(), 2u);
  EXPECT_EQ(t.candidate_count, 5);
  EXPECT_EQ(t.keep_count, 3);
}

TEST(ConfigTest, SweepsChangeOneParameter) {
  BenchmarkConfig c = ParseConfig(BaselineConfig(), ".");
  BenchmarkConfig k = c;
  ApplySweep(k, "k10");
  EXPECT_EQ(k.metrics.k_neighbors, 10);
  BenchmarkConfig l = c;
  ApplySweep(l, "l0.001");
  EXPECT_EQ(l.metrics.learn_fraction, 0.001);
  BenchmarkConfig t = c;
  ApplySweep(t, "theta5");
  EXPECT_EQ(t.metrics.theta, 5.0);
  EXPECT_THROW(ApplySweep(t, "k11"), Error);
  EXPECT_EQ(SweepSettings().size(), 4u);
}

TEST(ProvenanceFromFileNameTest, ParsesConventionalNames) {
  Provenance p = ProvenanceFromFileName("out/medGAN__run3__separate.csv",
                                        Paradigm::kCombined);
  EXPECT_EQ(p.model, "medGAN");
  EXPECT_EQ(p.run, 3);
  EXPECT_EQ(p.paradigm, Paradigm::kSeparate);
  Provenance q = ProvenanceFromFileName("synth.csv", Paradigm::kCombined);
  EXPECT_EQ(q.model, "synth");
  EXPECT_EQ(q.run, 1);
}

TEST(RunBenchmarkTest, SoleBaselineIsRecommendedAndReportIsComplete) {
  testing::TempDir dir("bench");
  WriteReal(dir.path(), 300);
  std::ofstream(dir.path() / "config.json") << BaselineConfig();
  BenchmarkConfig c = LoadConfig(dir.path() / "config.json");
  BenchmarkReport r = RunBenchmark(c);
  ASSERT_FALSE(r.failure.has_value());
  EXPECT_EQ(r.train_rows, 210);
  EXPECT_EQ(r.eval_rows, 90);
  EXPECT_EQ(r.candidates.size(), 3u);
  int kept = 0;
  for (const CandidateInfo& ci : r.candidates) kept += ci.kept;
  EXPECT_EQ(kept, 2);
  // Every kept dataset x metric pair appears exactly once.
  std::set<std::pair<std::string, MetricId>> pairs;
  for (const MetricRecord& m : r.records) pairs.insert({m.dataset, m.metric});
  EXPECT_EQ(pairs.size(), r.records.size());
  EXPECT_EQ(r.records.size(), 2 * kAllMetrics.size());
  ASSERT_EQ(r.profiles.size(), 3u);
  for (const ProfileResult& p : r.profiles) {
    ASSERT_EQ(p.ranking.size(), 1u);
    EXPECT_EQ(p.ranking[0].model, "Baseline");
  }
  EXPECT_EQ(r.metric_correlation.rows(), static_cast<Eigen::Index>(kAllMetrics.size()));
  EXPECT_TRUE(r.metric_correlation.isApprox(r.metric_correlation.transpose()));
}

TEST(RunBenchmarkTest, WritesTablesAndPlotData) {
  testing::TempDir dir("bench");
  WriteReal(dir.path(), 300);
  std::ofstream(dir.path() / "config.json") << BaselineConfig();
  BenchmarkConfig c = LoadConfig(dir.path() / "config.json");
  BenchmarkReport r = RunBenchmark(c);
  WriteReport(r, dir.path() / "out");
  for (const char* f : {"report.json", "timing.json", "tables/metric_values.csv",
                        "tables/ranks.csv", "tables/final_scores.csv",
                        "tables/mean_values.csv", "tables/candidates.csv",
                        "plots/prevalence_scatter.csv", "plots/metric_bars.csv",
                        "plots/rank_score_matrix.csv",
                        "plots/metric_correlation.csv"}) {
    EXPECT_TRUE(fs::exists(dir.path() / "out" / f)) << f;
  }
  // One scatter row per binary feature per kept dataset, plus the header.
  auto rows = csv::Parse(csv::ReadFile(dir.path() / "out/plots/prevalence_scatter.csv"));
  Dataset real = LoadDataset(dir.path() / "real.csv",
                             LoadSchema(dir.path() / "real.schema.json"));
  const size_t binaries =
      real.schema().IndicesWithKind(FeatureKind::kBinary).size() -
      r.dropped_features.size();
  EXPECT_EQ(rows.size(), 1 + 2 * binaries);
  auto report = nlohmann::json::parse(csv::ReadFile(dir.path() / "out/report.json"));
  EXPECT_EQ(report["status"], "ok");
  EXPECT_EQ(report["final_scores"]["Education"]["recommendation"], "Baseline");
  EXPECT_FALSE(report.contains("timing"));
}

TEST(RunBenchmarkTest, IdenticalSynthPutsScatterOnDiagonal) {
  testing::TempDir dir("bench");
  WriteReal(dir.path(), 300);
  // Pre-split input whose training file is re-exported as the only
  // generator output.
  std::ofstream(dir.path() / "config.json") << R"({
    "real": {"train": "real.csv", "eval": "real.csv"},
    "generators": [{"name": "Copy", "datasets": ["real.csv"]}],
    "candidate_count": 1, "keep_count": 1, "min_feature_count": 0,)"
      << kSmallMetrics << "}";
  BenchmarkReport r = RunBenchmark(LoadConfig(dir.path() / "config.json"));
  ASSERT_FALSE(r.failure.has_value());
  for (const PrevalencePoint& p : r.prevalence) EXPECT_EQ(p.real, p.synthetic);
  for (const MetricRecord& m : r.records) {
    if (m.metric == MetricId::kDwd || m.metric == MetricId::kCorrelation) {
      EXPECT_EQ(*m.value, 0.0);
    }
  }
}

TEST(RunBenchmarkTest, MetricFailureIsReportedWithPartialResults) {
  testing::TempDir dir("bench");
  WriteReal(dir.path(), 300, 1);
  // A population table that misses most real quasi-identifier groups.
  testing::FixtureOptions o;
  o.rows = 5;
  o.seed = 77;
  Dataset pop = testing::MakeEhrFixture(o);
  WriteDataset(pop, dir.path() / "pop.csv");
  WriteSchema(pop.schema(), dir.path() / "pop.schema.json");
  std::ofstream(dir.path() / "config.json") << R"({
    "real": {"data": "real.csv", "population": "pop.csv"},
    "generators": [{"name": "Baseline", "builtin": "baseline"}],
    "candidate_count": 3, "keep_count": 2, "min_feature_count": 5,)"
      << kSmallMetrics << "}";
  BenchmarkReport r = RunBenchmark(LoadConfig(dir.path() / "config.json"));
  ASSERT_TRUE(r.failure.has_value());
  EXPECT_EQ(r.failure->metric, "identity_disclosure");
  EXPECT_EQ(r.failure->generator, "Baseline");
  EXPECT_EQ(r.failure->code, ErrorCode::kPopulationCoverage);
  EXPECT_EQ(r.records.size(), 2 * (kAllMetrics.size() - 1));
  EXPECT_TRUE(r.profiles.empty());
  auto report = nlohmann::json::parse(ReportToJson(r));
  EXPECT_EQ(report["status"], "failed");
  EXPECT_EQ(report["failure"]["metric"], "identity_disclosure");
}

TEST(RunBenchmarkTest, WorkersDoNotChangeResults) {
  testing::TempDir dir("bench");
  WriteReal(dir.path(), 250);
  std::ofstream(dir.path() / "config.json") << BaselineConfig();
  BenchmarkConfig c = LoadConfig(dir.path() / "config.json");
  std::string one = ReportToJson(RunBenchmark(c));
  c.workers = 4;
  std::string four = ReportToJson(RunBenchmark(c));
  // The config echo excludes workers, so the reports are identical.
  EXPECT_EQ(one, four);
}

TEST(GenerateCandidatesTest, WritesOneFilePerCandidate) {
  testing::TempDir dir("bench");
  WriteReal(dir.path(), 200);
  std::ofstream(dir.path() / "config.json") << BaselineConfig();
  BenchmarkConfig c = LoadConfig(dir.path() / "config.json");
  std::vector<fs::path> files = GenerateCandidates(c, dir.path() / "gen");
  ASSERT_EQ(files.size(), 3u);
  EXPECT_EQ(files[0].filename(), "Baseline__run1__combined.csv");
  EXPECT_TRUE(fs::exists(SchemaSidecarPath(files[2])));
}

}  // namespace
}  // namespace synbench

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

// Command-line front end: bench run | profiles | generate | metrics | init.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "synbench/benchmark.h"

namespace fs = std::filesystem;
using synbench::BenchmarkConfig;
using synbench::BenchmarkReport;
using synbench::Error;
using synbench::ErrorCategory;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitMetric = 3;

int ExitCodeFor(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kConfig:
      return kExitConfig;
    case ErrorCategory::kData:
      return kExitData;
    case ErrorCategory::kMetric:
      return kExitMetric;
  }
  return kExitMetric;
}

struct CommonFlags {
  std::optional<uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
};

void ApplyFlags(const CommonFlags& flags, BenchmarkConfig& config) {
  if (flags.seed) config.seed = *flags.seed;
  if (flags.workers) config.workers = *flags.workers;
  if (flags.out) config.output_dir = *flags.out;
}

void PrintSummary(const BenchmarkReport& report, const fs::path& dir) {
  std::cout << "report: " << (dir / "report.json").string() << "\n";
  for (const synbench::ProfileResult& p : report.profiles) {
    std::cout << p.profile.name << ":";
    for (const synbench::FinalScore& s : p.ranking) {
      std::printf(" %s (%.3f)", s.model.c_str(), s.score);
    }
    std::cout << "\n";
  }
}

// Writes whatever exists, then reports the failure. Returns the exit code.
int Finish(const BenchmarkReport& report, const fs::path& dir) {
  synbench::WriteReport(report, dir);
  if (report.failure) {
    const synbench::BenchmarkFailure& f = *report.failure;
    std::cerr << "bench: metric '" << f.metric << "' failed for generator '"
              << f.generator << "', run " << f.run << " (" << f.dataset
              << "): " << f.message << "\n"
              << "bench: partial report written to " << dir.string() << "\n";
    return ExitCodeFor(synbench::CategoryOf(f.code));
  }
  PrintSummary(report, dir);
  return 0;
}

std::vector<std::string> ExpandSweep(const std::string& text) {
  if (text == "all") return synbench::SweepSettings();
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    if (end > start) out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

int RunCommand(const std::string& config_path, const CommonFlags& flags,
               const std::string& sweep) {
  BenchmarkConfig config = synbench::LoadConfig(config_path);
  ApplyFlags(flags, config);
  if (sweep.empty()) {
    return Finish(synbench::RunBenchmark(config), config.output_dir);
  }
  int status = 0;
  for (const std::string& setting : ExpandSweep(sweep)) {
    BenchmarkConfig variant = config;
    synbench::ApplySweep(variant, setting);
    fs::path dir = config.output_dir / ("sweep-" + setting);
    std::cout << "sweep " << setting << "\n";
    int code = Finish(synbench::RunBenchmark(variant), dir);
    if (status == 0) status = code;
  }
  return status;
}

int ProfilesCommand(bool as_json, const std::string& file) {
  std::vector<synbench::WeightProfile> profiles =
      file.empty() ? synbench::BuiltinProfiles() : synbench::LoadProfiles(file);
  if (as_json) {
    std::cout << "[\n";
    for (size_t i = 0; i < profiles.size(); ++i) {
      std::cout << synbench::FormatProfileJson(profiles[i])
                << (i + 1 < profiles.size() ? ",\n" : "\n");
    }
    std::cout << "]\n";
    return 0;
  }
  std::printf("%-24s", "metric");
  for (const auto& p : profiles) std::printf(" %12s", p.name.c_str());
  std::printf("\n");
  for (synbench::MetricId m : synbench::kAllMetrics) {
    std::printf("%-24s", std::string(synbench::MetricKey(m)).c_str());
    for (const auto& p : profiles) {
      auto it = p.weights.find(m);
      std::printf(" %12.4f", it == p.weights.end() ? 0.0 : it->second);
    }
    std::printf("\n");
  }
  return 0;
}

int GenerateCommand(const std::string& config_path, const CommonFlags& flags) {
  BenchmarkConfig config = synbench::LoadConfig(config_path);
  ApplyFlags(flags, config);
  fs::path dir = config.output_dir / "datasets";
  for (const fs::path& p : synbench::GenerateCandidates(config, dir)) {
    std::cout << p.string() << "\n";
  }
  return 0;
}

int MetricsCommand(const std::string& real, const std::vector<std::string>& synth,
                   const std::string& schema, const std::string& paradigm,
                   const CommonFlags& flags) {
  BenchmarkConfig config;
  config.real_data = real;
  config.real_schema = schema;
  config.paradigm = synbench::ParseParadigm(paradigm);
  config.min_feature_count = 0;
  config.rank = false;
  std::map<std::string, size_t> index;
  for (const std::string& file : synth) {
    synbench::Provenance tag =
        synbench::ProvenanceFromFileName(file, config.paradigm);
    auto [it, inserted] = index.emplace(tag.model, config.generators.size());
    if (inserted) config.generators.push_back({tag.model, false, {}});
    config.generators[it->second].datasets.push_back(file);
  }
  size_t most = 1;
  for (const auto& g : config.generators) most = std::max(most, g.datasets.size());
  config.candidate_count = static_cast<int>(most);
  config.keep_count = static_cast<int>(most);
  config.output_dir = "bench_metrics";
  ApplyFlags(flags, config);
  return Finish(synbench::RunBenchmark(config), config.output_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark synthetic EHR generators on utility and privacy."};
  app.set_version_flag("--version", std::string(synbench::Version()));
  app.require_subcommand(1);

  CommonFlags flags;
  auto add_common = [&flags](CLI::App* cmd) {
    cmd->add_option("--seed", flags.seed, "Global seed (overrides config)");
    cmd->add_option("--workers", flags.workers, "Phase-2 worker threads")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", flags.out, "Output directory");
  };

  std::string config_path, sweep;
  CLI::App* run = app.add_subcommand("run", "Run all three phases");
  run->add_option("config", config_path, "Config JSON")->required();
  run->add_option("--sweep", sweep,
                  "Sensitivity settings: all, or a comma list of k10,f1024,"
                  "theta5,l0.001");
  add_common(run);

  bool as_json = false;
  std::string profile_file;
  CLI::App* profiles = app.add_subcommand("profiles", "List weight profiles");
  profiles->add_flag("--json", as_json, "Print as JSON");
  profiles->add_option("--file", profile_file, "Load profiles from a file");

  CLI::App* generate =
      app.add_subcommand("generate", "Phase 1 only: write candidate datasets");
  generate->add_option("config", config_path, "Config JSON")->required();
  add_common(generate);

  std::string real, schema, paradigm = "combined";
  std::vector<std::string> synth;
  CLI::App* metrics =
      app.add_subcommand("metrics", "Phase 2 only on existing datasets");
  metrics->add_option("real", real, "Real dataset CSV")->required();
  metrics->add_option("synth", synth, "Synthetic dataset CSVs")->required();
  metrics->add_option("--schema", schema,
                      "Schema JSON (default: sidecar of the real CSV)");
  metrics->add_option("--paradigm", paradigm, "combined or separate");
  add_common(metrics);

  std::string init_path;
  CLI::App* init = app.add_subcommand("init", "Print a config template");
  init->add_option("--write", init_path, "Write the template to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return RunCommand(config_path, flags, sweep);
    if (*profiles) return ProfilesCommand(as_json, profile_file);
    if (*generate) return GenerateCommand(config_path, flags);
    if (*metrics) return MetricsCommand(real, synth, schema, paradigm, flags);
    if (*init) {
      std::string text = synbench::ConfigTemplate();
      if (init_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream(init_path) << text;
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "bench: " << synbench::ErrorCodeName(e.code()) << ": "
              << e.what() << "\n";
    return ExitCodeFor(e.category());
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << "\n";
    return kExitMetric;
  }
  return 0;
}

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

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <set>
#include <thread>

#include "csv.h"
#include "json.hpp"
#include "synbench/baseline.h"
#include "synbench/random.h"

namespace synbench {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Seed streams.
constexpr uint64_t kSplitStream = 1;
constexpr uint64_t kGenerateStream = 2;
constexpr uint64_t kMetricStream = 3;
constexpr uint64_t kReferenceStream = 4;

uint64_t HashString(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Json TriangularJson(const TriangularParams& t) {
  return Json::array({t.min, t.mode, t.max});
}

Json OptionalJson(const std::optional<double>& v) {
  if (v && std::isfinite(*v)) return *v;
  return nullptr;
}

Json NumberOrNull(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

// ---- Config parsing ----

// Reads fields from a JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& object, std::string where)
      : object_(object), where_(std::move(where)) {
    if (!object_.is_object()) {
      throw Error(ErrorCode::kConfig, where_ + " must be an object");
    }
  }

  const nlohmann::json* Get(const std::string& key) {
    seen_.insert(key);
    auto it = object_.find(key);
    if (it == object_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  template <typename T>
  void Read(const std::string& key, T& out) {
    if (const nlohmann::json* v = Get(key)) {
      try {
        out = v->get<T>();
      } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::kConfig,
                    where_ + "." + key + " has the wrong type");
      }
    }
  }

  void ReadPath(const std::string& key, const fs::path& base, fs::path& out) {
    std::string text;
    Read(key, text);
    if (!text.empty()) out = fs::path(text).is_absolute() ? fs::path(text)
                                                          : base / text;
  }

  void Finish() const {
    for (const auto& [key, value] : object_.items()) {
      if (!seen_.contains(key)) {
        throw Error(ErrorCode::kConfig,
                    "unknown key '" + key + "' in " + where_);
      }
    }
  }

 private:
  const nlohmann::json& object_;
  std::string where_;
  std::set<std::string> seen_;
};

TriangularParams ParseTriangular(const nlohmann::json& v,
                                 const std::string& key) {
  if (!v.is_array() || v.size() != 3) {
    throw Error(ErrorCode::kConfig, key + " must be [min, mode, max]");
  }
  TriangularParams t{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
  if (!(t.min <= t.mode && t.mode <= t.max)) {
    throw Error(ErrorCode::kConfig, key + " needs min <= mode <= max");
  }
  return t;
}

void ParseMetrics(const nlohmann::json& doc, MetricParams& m) {
  ObjectReader r(doc, "metrics");
  r.Read("clusters", m.clusters);
  r.Read("variance_target", m.variance_target);
  r.Read("k_neighbors", m.k_neighbors);
  r.Read("known_top_f", m.known_top_f);
  if (const auto* v = r.Get("known_features")) {
    m.known_features = v->get<std::vector<std::string>>();
  }
  r.Read("closeness", m.closeness);
  r.Read("theta", m.theta);
  r.Read("learn_fraction", m.learn_fraction);
  if (const auto* v = r.Get("lambda_verification")) {
    m.lambda_verification = ParseTriangular(*v, "lambda_verification");
  }
  if (const auto* v = r.Get("lambda_data_error")) {
    m.lambda_data_error = ParseTriangular(*v, "lambda_data_error");
  }
  r.Read("bootstrap", m.bootstrap);
  r.Read("risk_bootstrap", m.risk_bootstrap);
  r.Read("importance_repeats", m.importance_repeats);
  if (const auto* v = r.Get("top_m")) {
    if (v->is_string() && v->get<std::string>() == "auto") {
      m.top_m.reset();
    } else if (v->is_number_integer()) {
      m.top_m = v->get<int>();
    } else {
      throw Error(ErrorCode::kConfig, "metrics.top_m must be \"auto\" or an integer");
    }
  }
  r.Read("retain", m.retain);
  r.Read("knowledge_group", m.knowledge_group);
  r.Read("knowledge_top_m", m.knowledge_top_m);
  if (const auto* v = r.Get("qids")) {
    m.qids = v->get<std::vector<std::string>>();
  }
  if (const auto* v = r.Get("generalization")) {
    m.generalization = v->get<std::map<std::string, double>>();
  }
  r.Finish();
}

Json ConfigEcho(const BenchmarkConfig& c) {
  const MetricParams& m = c.metrics;
  Json real = {
      {"data", c.real_data.string()},
      {"schema", c.real_schema.string()},
      {"train", c.real_train.string()},
      {"eval", c.real_eval.string()},
      {"population", c.population.string()},
      {"population_schema", c.population_schema.string()},
      {"missing", c.missing == MissingPolicy::kReject ? "reject" : "drop_row"},
  };
  Json generators = Json::array();
  for (const GeneratorSpec& g : c.generators) {
    Json item = {{"name", g.name}};
    if (g.builtin_baseline) {
      item["builtin"] = "baseline";
    } else {
      Json files = Json::array();
      for (const fs::path& p : g.datasets) files.push_back(p.string());
      item["datasets"] = files;
    }
    generators.push_back(item);
  }
  Json metrics = {
      {"clusters", m.clusters},
      {"variance_target", m.variance_target},
      {"k_neighbors", m.k_neighbors},
      {"known_top_f", m.known_top_f},
      {"known_features", m.known_features ? Json(*m.known_features) : Json()},
      {"closeness", m.closeness},
      {"theta", m.theta},
      {"learn_fraction", m.learn_fraction},
      {"lambda_verification", TriangularJson(m.lambda_verification)},
      {"lambda_data_error", TriangularJson(m.lambda_data_error)},
      {"bootstrap", m.bootstrap},
      {"risk_bootstrap", m.risk_bootstrap},
      {"importance_repeats", m.importance_repeats},
      {"top_m", m.top_m ? Json(*m.top_m) : Json("auto")},
      {"retain", m.retain},
      {"knowledge_group",
       m.knowledge_group.empty() ? Json() : Json(m.knowledge_group)},
      {"knowledge_top_m", m.knowledge_top_m},
      {"qids", m.qids ? Json(*m.qids) : Json()},
      {"generalization", Json(m.generalization)},
  };
  Json profiles = Json::array();
  for (const WeightProfile& p : c.profiles) {
    profiles.push_back(Json::parse(FormatProfileJson(p)));
  }
  return {
      {"real", real},
      {"generators", generators},
      {"candidate_count", c.candidate_count},
      {"keep_count", c.keep_count},
      {"paradigm", std::string(ParadigmName(c.paradigm))},
      {"split", {{"ratio", c.split_ratio}, {"stratify", c.stratify}}},
      {"min_feature_count", c.min_feature_count},
      {"metrics", metrics},
      {"profiles", profiles},
      {"seed", c.seed},
      {"rank", c.rank},
  };
}

// ---- Data preparation ----

struct RealData {
  Schema schema;
  Dataset train;
  Dataset eval;
  Dataset population;
  std::vector<std::string> dropped;
  int64_t rows = 0;
};

fs::path SchemaPathFor(const fs::path& explicit_path, const fs::path& data) {
  return explicit_path.empty() ? SchemaSidecarPath(data) : explicit_path;
}

RealData LoadReal(const BenchmarkConfig& config) {
  LoadOptions options;
  options.missing = config.missing;
  const bool presplit = config.real_data.empty();
  Schema schema = LoadSchema(SchemaPathFor(
      config.real_schema, presplit ? config.real_train : config.real_data));

  std::optional<Dataset> train, eval;
  std::vector<std::string> dropped;
  int64_t rows = 0;
  if (!presplit) {
    Dataset full = LoadDataset(config.real_data, schema, Provenance::Real(),
                               options);
    rows = full.rows();
    FilterResult filtered = FilterRareFeatures(full, config.min_feature_count);
    dropped = filtered.dropped;
    bool stratify = config.stratify &&
                    filtered.dataset.schema().OutcomeIndex().has_value();
    auto parts = Split(filtered.dataset, config.split_ratio,
                       MixSeed(config.seed, kSplitStream), stratify);
    train = std::move(parts.first);
    eval = std::move(parts.second);
  } else {
    Dataset a = LoadDataset(config.real_train, schema, Provenance::Real(),
                            options);
    Dataset b = LoadDataset(config.real_eval, schema, Provenance::Real(),
                            options);
    rows = a.rows() + b.rows();
    FilterResult filtered =
        FilterRareFeatures(ConcatRows(a, b), config.min_feature_count);
    dropped = filtered.dropped;
    train = a.DropColumns(dropped);
    eval = b.DropColumns(dropped);
  }

  std::optional<Dataset> population;
  if (!config.population.empty()) {
    Schema pop_schema =
        LoadSchema(SchemaPathFor(config.population_schema, config.population));
    population = LoadDataset(config.population, pop_schema, Provenance::Real(),
                             options);
  } else {
    population = ConcatRows(*train, *eval);
  }
  Schema kept = train->schema();
  return {kept, std::move(*train), std::move(*eval), std::move(*population),
          std::move(dropped), rows};
}

struct Candidate {
  std::string model;
  Dataset raw;
  Dataset normalized;
};

// All candidates of one generator, before filtering.
std::vector<Candidate> MakeCandidates(const BenchmarkConfig& config,
                                      size_t generator_index,
                                      const RealData& real,
                                      const NormalizationContext& context) {
  const GeneratorSpec& g = config.generators[generator_index];
  std::vector<Candidate> out;
  if (g.builtin_baseline) {
    for (int run = 1; run <= config.candidate_count; ++run) {
      GenerationRequest request;
      request.n_out = real.train.rows();
      request.paradigm = config.paradigm;
      request.run_index = run;
      request.seed = MixSeed(config.seed, {kGenerateStream, generator_index,
                                           static_cast<uint64_t>(run)});
      Dataset raw = SampleMarginal(real.train, request)
                        .WithTag(Provenance::Synthetic(g.name, run,
                                                       config.paradigm));
      Dataset normalized = Normalize(raw, context);
      out.push_back({g.name, std::move(raw), std::move(normalized)});
    }
    return out;
  }
  int run = 0;
  for (const fs::path& path : g.datasets) {
    ++run;
    Dataset raw = LoadDataset(path, real.schema,
                              Provenance::Synthetic(g.name, run,
                                                    config.paradigm),
                              LoadOptions{config.missing});
    Dataset normalized = Normalize(raw, context);
    out.push_back({g.name, std::move(raw), std::move(normalized)});
  }
  return out;
}

// Runs tasks on up to `workers` threads. Each task writes only its own
// slot, so results do not depend on scheduling.
void RunParallel(std::vector<std::function<void()>>& tasks, int workers) {
  std::atomic<size_t> next{0};
  auto loop = [&] {
    for (size_t i = next++; i < tasks.size(); i = next++) tasks[i]();
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  std::vector<std::thread> threads;
  for (int i = 1; i < n; ++i) threads.emplace_back(loop);
  loop();
  for (std::thread& t : threads) t.join();
}

std::string CsvValue(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? csv::FormatDouble(*v) : "";
}

}  // namespace

std::string_view Version() { return SYNBENCH_VERSION; }

void BenchmarkConfig::Validate() const {
  if (generators.empty()) {
    throw Error(ErrorCode::kConfig, "at least one generator is required");
  }
  if (profiles.empty() && rank) {
    throw Error(ErrorCode::kConfig, "at least one profile is required");
  }
  if (real_data.empty() && (real_train.empty() || real_eval.empty())) {
    throw Error(ErrorCode::kConfig,
                "real.data or both real.train and real.eval are required");
  }
  if (keep_count < 1 || candidate_count < 1 || keep_count > candidate_count) {
    throw Error(ErrorCode::kConfig,
                "need 1 <= keep_count <= candidate_count");
  }
  std::set<std::string> names;
  for (const GeneratorSpec& g : generators) {
    if (g.name.empty() || !names.insert(g.name).second) {
      throw Error(ErrorCode::kConfig,
                  "generator names must be unique and non-empty");
    }
    if (!g.builtin_baseline && g.datasets.empty()) {
      throw Error(ErrorCode::kConfig,
                  "generator '" + g.name + "' lists no datasets");
    }
  }
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw Error(ErrorCode::kConfig, "split ratio must lie in (0,1)");
  }
  if (workers < 1) throw Error(ErrorCode::kConfig, "workers must be >= 1");
  const MetricParams& m = metrics;
  if (m.clusters < 1 || m.k_neighbors < 1 || m.known_top_f < 0 ||
      m.bootstrap < 0 || m.risk_bootstrap < 0 || m.importance_repeats < 1 ||
      m.knowledge_top_m < 0 || (m.top_m && *m.top_m < 1)) {
    throw Error(ErrorCode::kConfig, "metric parameters out of range");
  }
  if (!(m.theta > 0.0) || !(m.learn_fraction > 0.0 && m.learn_fraction <= 1.0) ||
      !(m.variance_target > 0.0 && m.variance_target <= 1.0) ||
      !(m.closeness >= 0.0) || !(m.retain >= 0.0 && m.retain <= 1.0)) {
    throw Error(ErrorCode::kConfig, "metric parameters out of range");
  }
  for (const WeightProfile& p : profiles) p.Validate();
}

BenchmarkConfig ParseConfig(std::string_view json_text,
                            const fs::path& base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("config is not JSON: ") + e.what());
  }
  BenchmarkConfig c;
  try {
    ObjectReader top(doc, "config");
    if (const auto* real = top.Get("real")) {
      ObjectReader r(*real, "real");
      r.ReadPath("data", base_dir, c.real_data);
      r.ReadPath("schema", base_dir, c.real_schema);
      r.ReadPath("train", base_dir, c.real_train);
      r.ReadPath("eval", base_dir, c.real_eval);
      r.ReadPath("population", base_dir, c.population);
      r.ReadPath("population_schema", base_dir, c.population_schema);
      std::string missing = "reject";
      r.Read("missing", missing);
      if (missing == "reject") {
        c.missing = MissingPolicy::kReject;
      } else if (missing == "drop_row") {
        c.missing = MissingPolicy::kDropRow;
      } else {
        throw Error(ErrorCode::kConfig, "real.missing must be reject or drop_row");
      }
      r.Finish();
    }
    if (const auto* gens = top.Get("generators")) {
      if (!gens->is_array()) {
        throw Error(ErrorCode::kConfig, "generators must be an array");
      }
      for (const auto& item : *gens) {
        ObjectReader g(item, "generator");
        GeneratorSpec spec;
        g.Read("name", spec.name);
        std::string builtin;
        g.Read("builtin", builtin);
        if (!builtin.empty()) {
          if (builtin != "baseline") {
            throw Error(ErrorCode::kConfig, "unknown builtin generator '" +
                                                builtin + "'");
          }
          spec.builtin_baseline = true;
        }
        std::vector<std::string> files;
        g.Read("datasets", files);
        for (const std::string& f : files) {
          spec.datasets.push_back(fs::path(f).is_absolute() ? fs::path(f)
                                                            : base_dir / f);
        }
        g.Finish();
        c.generators.push_back(std::move(spec));
      }
    }
    top.Read("candidate_count", c.candidate_count);
    top.Read("keep_count", c.keep_count);
    std::string paradigm = "combined";
    top.Read("paradigm", paradigm);
    c.paradigm = ParseParadigm(paradigm);
    if (const auto* split = top.Get("split")) {
      ObjectReader s(*split, "split");
      s.Read("ratio", c.split_ratio);
      s.Read("stratify", c.stratify);
      s.Finish();
    }
    top.Read("min_feature_count", c.min_feature_count);
    if (const auto* metrics = top.Get("metrics")) ParseMetrics(*metrics, c.metrics);
    if (const auto* profiles = top.Get("profiles")) {
      if (!profiles->is_array()) {
        throw Error(ErrorCode::kConfig, "profiles must be an array");
      }
      std::vector<WeightProfile> builtins = BuiltinProfiles();
      for (const auto& item : *profiles) {
        if (item.is_string()) {
          const WeightProfile* p = FindProfile(builtins, item.get<std::string>());
          if (!p) {
            throw Error(ErrorCode::kConfig, "unknown profile '" +
                                                item.get<std::string>() + "'");
          }
          c.profiles.push_back(*p);
        } else if (item.is_object() && item.contains("file")) {
          fs::path file = item["file"].get<std::string>();
          if (!file.is_absolute()) file = base_dir / file;
          for (WeightProfile& p : LoadProfiles(file)) {
            c.profiles.push_back(std::move(p));
          }
        } else {
          c.profiles.push_back(ParseProfileJson(item.dump()));
        }
      }
    } else {
      c.profiles = BuiltinProfiles();
    }
    top.Read("seed", c.seed);
    top.Read("workers", c.workers);
    std::string out;
    top.Read("output_dir", out);
    if (!out.empty()) {
      c.output_dir = fs::path(out).is_absolute() ? fs::path(out) : base_dir / out;
    } else {
      c.output_dir = base_dir / "bench_out";
    }
    top.Read("rank", c.rank);
    top.Finish();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("bad config value: ") + e.what());
  }
  c.Validate();
  return c;
}

BenchmarkConfig LoadConfig(const fs::path& path) {
  fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::string text;
  try {
    text = csv::ReadFile(path);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  return ParseConfig(text, base);
}

std::string ConfigTemplate() {
  BenchmarkConfig c;
  c.real_data = "real.csv";
  c.real_schema = "real.schema.json";
  c.generators.push_back({"Baseline", true, {}});
  c.generators.push_back({"MyGenerator", false,
                          {"my_generator__run1__combined.csv",
                           "my_generator__run2__combined.csv",
                           "my_generator__run3__combined.csv"}});
  c.profiles = BuiltinProfiles();
  Json doc = ConfigEcho(c);
  doc["profiles"] = Json::array({"Education", "Medical-AI", "Systems-Dev"});
  doc["workers"] = c.workers;
  doc["output_dir"] = c.output_dir.string();
  return doc.dump(2) + "\n";
}

std::vector<std::string> SweepSettings() {
  return {"k10", "f1024", "theta5", "l0.001"};
}

void ApplySweep(BenchmarkConfig& config, std::string_view setting) {
  if (setting == "k10") {
    config.metrics.k_neighbors = 10;
  } else if (setting == "f1024") {
    config.metrics.known_top_f = 1024;
  } else if (setting == "theta5") {
    config.metrics.theta = 5.0;
  } else if (setting == "l0.001") {
    config.metrics.learn_fraction = 0.001;
  } else {
    throw Error(ErrorCode::kConfig,
                "unknown sweep setting '" + std::string(setting) + "'");
  }
}

Provenance ProvenanceFromFileName(const fs::path& path, Paradigm fallback) {
  std::string stem = path.stem().string();
  size_t a = stem.find("__run");
  if (a != std::string::npos) {
    size_t b = stem.find("__", a + 5);
    std::string run_text = stem.substr(a + 5, b == std::string::npos
                                                  ? std::string::npos
                                                  : b - a - 5);
    int run = 0;
    auto r = std::from_chars(run_text.data(), run_text.data() + run_text.size(),
                             run);
    if (r.ec == std::errc() && r.ptr == run_text.data() + run_text.size() &&
        a > 0) {
      Paradigm paradigm = fallback;
      if (b != std::string::npos) paradigm = ParseParadigm(stem.substr(b + 2));
      return Provenance::Synthetic(stem.substr(0, a), run, paradigm);
    }
  }
  return Provenance::Synthetic(stem, 1, fallback);
}

std::vector<fs::path> GenerateCandidates(const BenchmarkConfig& config,
                                         const fs::path& dir) {
  config.Validate();
  RealData real = LoadReal(config);
  NormalizationContext context = NormalizationContext::Fit(real.train);
  std::vector<fs::path> written;
  for (size_t g = 0; g < config.generators.size(); ++g) {
    for (const Candidate& c : MakeCandidates(config, g, real, context)) {
      fs::path path = dir / (c.raw.tag().Id() + ".csv");
      WriteDataset(c.raw, path);
      WriteSchema(c.raw.schema(), SchemaSidecarPath(path));
      written.push_back(path);
    }
  }
  return written;
}

BenchmarkReport RunBenchmark(const BenchmarkConfig& config) {
  using Clock = std::chrono::steady_clock;
  auto seconds_since = [](Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
  };
  config.Validate();
  const MetricParams& mp = config.metrics;
  BenchmarkReport report;
  report.config_json = ConfigEcho(config).dump();

  // Phase 1: real data, candidates, filtering.
  auto t0 = Clock::now();
  RealData real = LoadReal(config);
  report.real_rows = real.rows;
  report.train_rows = real.train.rows();
  report.eval_rows = real.eval.rows();
  report.dropped_features = real.dropped;
  NormalizationContext context = NormalizationContext::Fit(real.train);
  Dataset train = Normalize(real.train, context);
  Dataset eval = Normalize(real.eval, context);

  std::vector<Candidate> kept;
  for (size_t g = 0; g < config.generators.size(); ++g) {
    std::vector<Candidate> candidates = MakeCandidates(config, g, real, context);
    std::vector<Dataset> normalized;
    for (const Candidate& c : candidates) normalized.push_back(c.normalized);
    const size_t keep =
        std::min(candidates.size(), static_cast<size_t>(config.keep_count));
    std::vector<double> scores;
    std::vector<size_t> chosen = SelectTopCandidates(train, normalized, keep,
                                                     config.paradigm, &scores);
    std::set<size_t> chosen_set(chosen.begin(), chosen.end());
    for (size_t i = 0; i < candidates.size(); ++i) {
      report.candidates.push_back({candidates[i].model,
                                   candidates[i].raw.tag().Id(),
                                   candidates[i].raw.tag().run, scores[i],
                                   chosen_set.contains(i)});
    }
    std::sort(chosen.begin(), chosen.end());
    for (size_t i : chosen) kept.push_back(std::move(candidates[i]));
  }
  report.timing_seconds["phase1_generate"] = seconds_since(t0);

  // Shared inputs of phase 2.
  auto t1 = Clock::now();
  const bool has_outcome = train.schema().OutcomeIndex().has_value();
  LogisticRegression classifier;
  PredictionOptions prediction;
  prediction.bootstrap_resamples = mp.bootstrap;
  prediction.importance_repeats = mp.importance_repeats;
  std::vector<std::string> real_ranking;
  if (has_outcome) {
    PredictionReport ref =
        EvaluateTrts(train, eval, classifier, prediction,
                     MixSeed(config.seed, kReferenceStream));
    report.reference_auroc = ref.auroc;
    report.reference_ci = ref.ci;
    real_ranking = ref.RankedFeatures();
    if (mp.top_m) {
      report.top_m = std::min<int>(*mp.top_m,
                                   static_cast<int>(real_ranking.size()));
    } else {
      report.top_m = CalibrateTopM(train, eval, classifier, mp.retain,
                                   MixSeed(config.seed, kReferenceStream),
                                   mp.importance_repeats);
      report.top_m_calibrated = true;
    }
  }
  std::vector<Dataset> kept_normalized;
  for (const Candidate& c : kept) kept_normalized.push_back(c.normalized);
  DwdNormalizer dwd_normalizer = DwdNormalizer::Fit(train, kept_normalized);
  std::string knowledge_note;
  if (mp.knowledge_group.empty()) {
    knowledge_note = "no knowledge group feature configured";
  } else {
    report.knowledge_rule =
        DeriveKnowledgeRules(train, mp.knowledge_group, mp.knowledge_top_m);
    if (report.knowledge_rule.codes.empty()) {
      knowledge_note = "no group-exclusive codes in the real data";
    }
  }
  std::vector<std::string> known =
      mp.known_features ? *mp.known_features
                        : DefaultKnownFeatures(train, mp.known_top_f);
  std::vector<std::string> qids;
  if (mp.qids) {
    qids = *mp.qids;
  } else {
    for (size_t c : train.schema().IndicesWithRole(FeatureRole::kQuasiIdentifier)) {
      qids.push_back(train.schema()[c].name);
    }
  }

  // One slot per (dataset, metric).
  const size_t n_metrics = kAllMetrics.size();
  std::vector<MetricRecord> slots(kept.size() * n_metrics);
  std::vector<std::exception_ptr> errors(slots.size());
  std::vector<std::vector<CodeViolation>> knowledge_tables(kept.size());
  for (size_t d = 0; d < kept.size(); ++d) {
    for (size_t m = 0; m < n_metrics; ++m) {
      MetricRecord& r = slots[d * n_metrics + m];
      r.model = kept[d].model;
      r.dataset = kept[d].raw.tag().Id();
      r.run = kept[d].raw.tag().run;
      r.paradigm = kept[d].raw.tag().paradigm;
      r.metric = kAllMetrics[m];
    }
  }
  auto slot = [&](size_t d, MetricId m) -> MetricRecord& {
    return slots[d * n_metrics + static_cast<size_t>(m)];
  };
  auto seed_for = [&](size_t d, MetricId m) {
    return MixSeed(config.seed, {kMetricStream, static_cast<uint64_t>(m),
                                 HashString(kept[d].raw.tag().Id())});
  };

  std::vector<std::function<void()>> tasks;
  std::vector<std::pair<size_t, MetricId>> task_keys;
  auto add = [&](size_t d, MetricId m, std::function<void()> body) {
    const size_t index = d * n_metrics + static_cast<size_t>(m);
    tasks.push_back([&errors, index, body = std::move(body)] {
      try {
        body();
      } catch (...) {
        errors[index] = std::current_exception();
      }
    });
    task_keys.emplace_back(d, m);
  };

  for (size_t d = 0; d < kept.size(); ++d) {
    const Dataset& synth = kept[d].normalized;
    const Dataset& synth_raw = kept[d].raw;
    add(d, MetricId::kDwd, [&, d] {
      slot(d, MetricId::kDwd).value = DimensionWiseDistribution(
          train, synth, dwd_normalizer, config.paradigm);
    });
    add(d, MetricId::kCorrelation, [&, d] {
      slot(d, MetricId::kCorrelation).value =
          CorrelationDistance(train, synth, config.paradigm);
    });
    add(d, MetricId::kLatent, [&, d] {
      LatentOptions options;
      options.clusters = mp.clusters;
      options.variance_target = mp.variance_target;
      options.seed = seed_for(d, MetricId::kLatent);
      slot(d, MetricId::kLatent).value =
          LatentDeviation(train, synth, options, config.paradigm).value;
    });
    add(d, MetricId::kTstr, [&, d] {
      MetricRecord& tstr = slot(d, MetricId::kTstr);
      MetricRecord& fsel = slot(d, MetricId::kFeatureSelection);
      if (!has_outcome) {
        tstr.note = fsel.note = "no outcome column";
        return;
      }
      PredictionReport r = EvaluateTstr(synth, eval, classifier, prediction,
                                        seed_for(d, MetricId::kTstr));
      tstr.value = r.auroc;
      tstr.ci = r.ci;
      tstr.degenerate = r.degenerate;
      if (r.degenerate) tstr.note = "single-label synthetic training data";
      fsel.value = FeatureOverlap(r.RankedFeatures(), real_ranking, report.top_m);
      fsel.degenerate = r.degenerate;
      fsel.note = "M=" + std::to_string(report.top_m);
    });
    add(d, MetricId::kTrts, [&, d] {
      MetricRecord& trts = slot(d, MetricId::kTrts);
      if (!has_outcome) {
        trts.note = "no outcome column";
        return;
      }
      PredictionOptions options = prediction;
      options.compute_importance = false;
      PredictionReport r = EvaluateTrts(eval, synth, classifier, options,
                                        seed_for(d, MetricId::kTrts));
      trts.value = r.auroc;
      trts.ci = r.ci;
      trts.degenerate = r.degenerate;
      if (r.degenerate) trts.note = "single-label synthetic test data";
    });
    add(d, MetricId::kKnowledge, [&, d] {
      MetricRecord& rec = slot(d, MetricId::kKnowledge);
      if (!knowledge_note.empty()) {
        rec.note = knowledge_note;
        return;
      }
      KnowledgeResult r = KnowledgeViolation(synth, report.knowledge_rule);
      rec.value = r.score;
      if (!r.score) rec.note = "no synthetic carrier of any rule code";
      knowledge_tables[d] = std::move(r.codes);
    });
    add(d, MetricId::kAttributeInference, [&, d] {
      AttributeAttackConfig attack;
      attack.k_neighbors = mp.k_neighbors;
      attack.known_features = known;
      attack.closeness_threshold = mp.closeness;
      attack.bootstrap_resamples = mp.risk_bootstrap;
      attack.seed = seed_for(d, MetricId::kAttributeInference);
      AttributeRiskReport r = AttributeInferenceRisk(train, synth, train, attack);
      slot(d, MetricId::kAttributeInference).value = r.risk;
      slot(d, MetricId::kAttributeInference).ci = r.ci;
    });
    add(d, MetricId::kMembershipInference, [&, d] {
      MembershipAttackConfig attack;
      attack.distance_threshold = mp.theta;
      attack.bootstrap_resamples = mp.risk_bootstrap;
      attack.seed = seed_for(d, MetricId::kMembershipInference);
      MembershipRiskReport r = MembershipInferenceRisk(train, eval, synth, attack);
      slot(d, MetricId::kMembershipInference).value = r.risk;
      slot(d, MetricId::kMembershipInference).ci = r.ci;
    });
    add(d, MetricId::kIdentityDisclosure, [&, d] {
      MetricRecord& rec = slot(d, MetricId::kIdentityDisclosure);
      if (qids.empty()) {
        rec.note = "no quasi-identifiers configured";
        return;
      }
      DisclosureConfig disclosure;
      disclosure.qids = qids;
      disclosure.generalization = mp.generalization;
      disclosure.learn_fraction = mp.learn_fraction;
      disclosure.verification = mp.lambda_verification;
      disclosure.data_error = mp.lambda_data_error;
      disclosure.bootstrap_resamples = mp.risk_bootstrap;
      // The lambda draws depend on the record only, so every dataset sees
      // the same adversary.
      disclosure.seed = MixSeed(config.seed, {kMetricStream, 0xd15c});
      DisclosureRiskReport r =
          IdentityDisclosureRisk(synth_raw, real.train, real.population,
                                 disclosure);
      rec.value = r.risk;
      rec.ci = r.ci;
    });
  }
  RunParallel(tasks, config.workers);

  for (const auto& [d, m] : task_keys) {
    const size_t index = d * n_metrics + static_cast<size_t>(m);
    if (!errors[index] || report.failure) continue;
    BenchmarkFailure failure;
    failure.generator = kept[d].model;
    failure.dataset = kept[d].raw.tag().Id();
    failure.run = kept[d].raw.tag().run;
    failure.metric = std::string(MetricKey(m));
    try {
      std::rethrow_exception(errors[index]);
    } catch (const Error& e) {
      failure.code = e.code();
      failure.message = e.what();
    } catch (const std::exception& e) {
      failure.message = e.what();
    }
    report.failure = failure;
  }
  for (size_t i = 0; i < slots.size(); ++i) {
    const size_t d = i / n_metrics;
    const MetricId m = kAllMetrics[i % n_metrics];
    // Feature selection shares the TSTR task.
    const size_t owner = m == MetricId::kFeatureSelection
                             ? d * n_metrics +
                                   static_cast<size_t>(MetricId::kTstr)
                             : i;
    if (errors[owner]) continue;
    report.records.push_back(slots[i]);
  }
  for (size_t d = 0; d < kept.size(); ++d) {
    if (!knowledge_tables[d].empty()) {
      report.knowledge_codes[kept[d].raw.tag().Id()] = knowledge_tables[d];
    }
  }
  for (size_t d = 0; d < kept.size(); ++d) {
    for (size_t c : train.schema().IndicesWithKind(FeatureKind::kBinary)) {
      report.prevalence.push_back({kept[d].raw.tag().Id(),
                                   train.schema()[c].name,
                                   Prevalence(train, c),
                                   Prevalence(kept[d].normalized, c)});
    }
  }
  report.timing_seconds["phase2_assess"] = seconds_since(t1);

  report.notes = {
      "feature importance: permutation importance on each model's own "
      "training data",
      "knowledge violation: mean over rule codes with at least one synthetic "
      "carrier",
      "undefined metric values share the worst adjusted rank",
      "identity disclosure lambda: product of verification and data-error "
      "triangular draws",
  };
  if (report.failure || !config.rank) return report;

  // Phase 3.
  auto t2 = Clock::now();
  for (MetricId m : kAllMetrics) {
    std::vector<DatasetValue> values;
    for (const MetricRecord& r : report.records) {
      if (r.metric == m) values.push_back({r.model, r.dataset, r.value});
    }
    if (values.empty()) continue;
    MetricRanking ranking = RankDerivedScores(values, DirectionOf(m));
    report.rank_scores[m] = ranking.model_scores;
    report.mean_values[m] = MeanValues(values);
    report.rankings[m] = std::move(ranking);
  }
  for (const WeightProfile& p : config.profiles) {
    report.profiles.push_back({p, FinalScores(report.rank_scores, p)});
  }
  std::vector<MetricId> metrics(kAllMetrics.begin(), kAllMetrics.end());
  report.metric_correlation = MetricCorrelation(report.rank_scores, metrics);
  report.timing_seconds["phase3_rank"] = seconds_since(t2);
  return report;
}

std::string ReportToJson(const BenchmarkReport& report) {
  Json doc;
  doc["tool"] = {{"name", "synbench"}, {"version", std::string(Version())}};
  doc["status"] = report.failure ? "failed" : "ok";
  if (report.failure) {
    const BenchmarkFailure& f = *report.failure;
    doc["failure"] = {{"generator", f.generator},
                      {"dataset", f.dataset},
                      {"run", f.run},
                      {"metric", f.metric},
                      {"error", std::string(ErrorCodeName(f.code))},
                      {"message", f.message}};
  }
  doc["config"] = Json::parse(report.config_json);

  Json rule = Json::array();
  for (const ExclusiveCode& c : report.knowledge_rule.codes) {
    rule.push_back({{"code", c.code},
                    {"group", c.group},
                    {"count", c.count},
                    {"prevalence", c.prevalence}});
  }
  doc["preprocessing"] = {
      {"real_rows", report.real_rows},
      {"train_rows", report.train_rows},
      {"eval_rows", report.eval_rows},
      {"dropped_features", report.dropped_features},
      {"top_m", report.top_m},
      {"top_m_source", report.top_m_calibrated ? "calibrated" : "config"},
      {"reference_auroc", OptionalJson(report.reference_auroc)},
      {"reference_ci",
       report.reference_auroc
           ? Json::array({report.reference_ci.lo, report.reference_ci.hi})
           : Json()},
      {"knowledge_rule", rule},
  };

  Json candidates = Json::array();
  for (const CandidateInfo& c : report.candidates) {
    candidates.push_back({{"model", c.model},
                          {"dataset", c.dataset},
                          {"run", c.run},
                          {"dwd", NumberOrNull(c.dwd)},
                          {"kept", c.kept}});
  }
  doc["candidates"] = candidates;

  Json records = Json::array();
  for (const MetricRecord& r : report.records) {
    Json item = {{"model", r.model},
                 {"dataset", r.dataset},
                 {"run", r.run},
                 {"paradigm", std::string(ParadigmName(r.paradigm))},
                 {"metric", std::string(MetricKey(r.metric))},
                 {"value", OptionalJson(r.value)},
                 {"defined", r.value.has_value() && std::isfinite(*r.value)},
                 {"ci", r.ci ? Json::array({r.ci->lo, r.ci->hi}) : Json()},
                 {"degenerate", r.degenerate}};
    if (!r.note.empty()) item["note"] = r.note;
    records.push_back(item);
  }
  doc["metrics"] = records;

  Json knowledge = Json::object();
  for (const auto& [dataset, codes] : report.knowledge_codes) {
    Json rows = Json::array();
    for (const CodeViolation& v : codes) {
      rows.push_back({{"code", v.code},
                      {"group", v.group},
                      {"carriers", v.carriers},
                      {"violations", v.violations},
                      {"rate", NumberOrNull(v.rate)}});
    }
    knowledge[dataset] = rows;
  }
  doc["knowledge_violation_codes"] = knowledge;

  Json rankings = Json::object();
  for (const auto& [metric, ranking] : report.rankings) {
    Json datasets = Json::array();
    for (const RankedDataset& d : ranking.datasets) {
      datasets.push_back({{"model", d.model},
                          {"dataset", d.dataset},
                          {"value", OptionalJson(d.value)},
                          {"rank", d.rank}});
    }
    Json item = {
        {"direction",
         DirectionOf(metric) == Direction::kLower ? "lower" : "higher"},
        {"datasets", datasets},
        {"rank_derived_scores", Json(ranking.model_scores)},
        {"undefined_models", Json(ranking.undefined_models)},
    };
    Json means = Json::object();
    for (const auto& [model, v] : report.mean_values.at(metric)) {
      means[model] = OptionalJson(v);
    }
    item["mean_values"] = means;
    rankings[std::string(MetricKey(metric))] = item;
  }
  doc["rankings"] = rankings;

  Json profiles = Json::object();
  for (const ProfileResult& p : report.profiles) {
    Json ranking = Json::array();
    for (const FinalScore& s : p.ranking) {
      ranking.push_back(
          {{"model", s.model}, {"score", s.score}, {"tied", s.tied}});
    }
    profiles[p.profile.name] = {
        {"weights", Json::parse(FormatProfileJson(p.profile))["weights"]},
        {"ranking", ranking},
        {"recommendation", p.ranking.empty() ? Json() : Json(p.ranking[0].model)},
    };
  }
  doc["final_scores"] = profiles;

  if (report.metric_correlation.size() > 0) {
    Json keys = Json::array();
    for (MetricId m : kAllMetrics) keys.push_back(std::string(MetricKey(m)));
    Json matrix = Json::array();
    for (Eigen::Index i = 0; i < report.metric_correlation.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < report.metric_correlation.cols(); ++j) {
        row.push_back(report.metric_correlation(i, j));
      }
      matrix.push_back(row);
    }
    doc["metric_correlation"] = {{"metrics", keys}, {"matrix", matrix}};
  }
  doc["notes"] = report.notes;
  return doc.dump(2) + "\n";
}

std::string TimingToJson(const BenchmarkReport& report) {
  Json doc = Json::object();
  for (const auto& [phase, seconds] : report.timing_seconds) doc[phase] = seconds;
  return doc.dump(2) + "\n";
}

void WriteReport(const BenchmarkReport& report, const fs::path& dir) {
  csv::WriteFile(dir / "report.json", ReportToJson(report));
  csv::WriteFile(dir / "timing.json", TimingToJson(report));

  std::string values = csv::FormatRow({"model", "dataset", "run", "paradigm",
                                       "metric", "value", "defined", "ci_lo",
                                       "ci_hi", "degenerate", "note"});
  for (const MetricRecord& r : report.records) {
    values += csv::FormatRow(
        {r.model, r.dataset, std::to_string(r.run),
         std::string(ParadigmName(r.paradigm)), std::string(MetricKey(r.metric)),
         CsvValue(r.value), r.value ? "1" : "0",
         r.ci ? csv::FormatDouble(r.ci->lo) : "",
         r.ci ? csv::FormatDouble(r.ci->hi) : "", r.degenerate ? "1" : "0",
         r.note});
  }
  csv::WriteFile(dir / "tables" / "metric_values.csv", values);

  std::string candidates =
      csv::FormatRow({"model", "dataset", "run", "dwd", "kept"});
  for (const CandidateInfo& c : report.candidates) {
    candidates += csv::FormatRow({c.model, c.dataset, std::to_string(c.run),
                                  csv::FormatDouble(c.dwd), c.kept ? "1" : "0"});
  }
  csv::WriteFile(dir / "tables" / "candidates.csv", candidates);

  std::string ranks =
      csv::FormatRow({"metric", "model", "dataset", "value", "rank"});
  for (const auto& [metric, ranking] : report.rankings) {
    for (const RankedDataset& d : ranking.datasets) {
      ranks += csv::FormatRow({std::string(MetricKey(metric)), d.model,
                               d.dataset, CsvValue(d.value),
                               csv::FormatDouble(d.rank)});
    }
  }
  csv::WriteFile(dir / "tables" / "ranks.csv", ranks);

  std::set<std::string> models;
  for (const auto& [metric, scores] : report.rank_scores) {
    for (const auto& [model, score] : scores) models.insert(model);
  }
  csv::Row header = {"model"};
  for (const auto& [metric, scores] : report.rank_scores) {
    header.push_back(std::string(MetricKey(metric)));
  }
  std::string matrix = csv::FormatRow(header);
  std::string means = csv::FormatRow(header);
  for (const std::string& model : models) {
    csv::Row row = {model}, mean_row = {model};
    for (const auto& [metric, scores] : report.rank_scores) {
      auto it = scores.find(model);
      row.push_back(it == scores.end() ? "" : csv::FormatDouble(it->second));
      const auto& mv = report.mean_values.at(metric);
      auto m = mv.find(model);
      mean_row.push_back(m == mv.end() ? "" : CsvValue(m->second));
    }
    matrix += csv::FormatRow(row);
    means += csv::FormatRow(mean_row);
  }
  csv::WriteFile(dir / "tables" / "mean_values.csv", means);
  csv::WriteFile(dir / "plots" / "rank_score_matrix.csv", matrix);

  std::string finals =
      csv::FormatRow({"profile", "position", "model", "score", "tied"});
  for (const ProfileResult& p : report.profiles) {
    for (size_t i = 0; i < p.ranking.size(); ++i) {
      finals += csv::FormatRow({p.profile.name, std::to_string(i + 1),
                                p.ranking[i].model,
                                csv::FormatDouble(p.ranking[i].score),
                                p.ranking[i].tied ? "1" : "0"});
    }
  }
  csv::WriteFile(dir / "tables" / "final_scores.csv", finals);

  std::string scatter =
      csv::FormatRow({"dataset", "feature", "real_prevalence",
                      "synthetic_prevalence"});
  for (const PrevalencePoint& p : report.prevalence) {
    scatter += csv::FormatRow({p.dataset, p.feature, csv::FormatDouble(p.real),
                               csv::FormatDouble(p.synthetic)});
  }
  csv::WriteFile(dir / "plots" / "prevalence_scatter.csv", scatter);

  std::string bars = csv::FormatRow(
      {"metric", "model", "dataset", "value", "ci_lo", "ci_hi"});
  for (const MetricRecord& r : report.records) {
    bars += csv::FormatRow({std::string(MetricKey(r.metric)), r.model, r.dataset,
                            CsvValue(r.value),
                            r.ci ? csv::FormatDouble(r.ci->lo) : "",
                            r.ci ? csv::FormatDouble(r.ci->hi) : ""});
  }
  csv::WriteFile(dir / "plots" / "metric_bars.csv", bars);

  if (report.metric_correlation.size() > 0) {
    csv::Row corr_header = {"metric"};
    for (MetricId m : kAllMetrics) corr_header.push_back(std::string(MetricKey(m)));
    std::string corr = csv::FormatRow(corr_header);
    for (Eigen::Index i = 0; i < report.metric_correlation.rows(); ++i) {
      csv::Row row = {std::string(MetricKey(kAllMetrics[static_cast<size_t>(i)]))};
      for (Eigen::Index j = 0; j < report.metric_correlation.cols(); ++j) {
        row.push_back(csv::FormatDouble(report.metric_correlation(i, j)));
      }
      corr += csv::FormatRow(row);
    }
    csv::WriteFile(dir / "plots" / "metric_correlation.csv", corr);
  }
}

}  // namespace synbench

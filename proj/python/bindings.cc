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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "synbench/baseline.h"
#include "synbench/benchmark.h"

namespace py = pybind11;
using namespace synbench;  // NOLINT

namespace {

using ColumnSpec = std::tuple<std::string, std::string, std::string>;

Dataset MakeDataset(const std::vector<ColumnSpec>& columns,
                    const Eigen::MatrixXd& values) {
  std::vector<FeatureSpec> specs;
  for (const auto& [name, kind, role] : columns) {
    specs.push_back({name, ParseFeatureKind(kind), ParseFeatureRole(role)});
  }
  return Dataset(Schema(std::move(specs)), values);
}

std::vector<ColumnSpec> ColumnsOf(const Dataset& d) {
  std::vector<ColumnSpec> out;
  for (const FeatureSpec& f : d.schema().features()) {
    out.emplace_back(f.name, std::string(FeatureKindName(f.kind)),
                     std::string(FeatureRoleName(f.role)));
  }
  return out;
}

py::dict PredictionToDict(const PredictionReport& r) {
  py::dict d;
  d["auroc"] = r.auroc;
  d["ci"] = py::make_tuple(r.ci.lo, r.ci.hi);
  d["degenerate"] = r.degenerate;
  d["ranked_features"] = r.RankedFeatures();
  return d;
}

WeightProfile ProfileFrom(const py::object& profile) {
  if (py::isinstance<py::str>(profile)) {
    std::vector<WeightProfile> builtins = BuiltinProfiles();
    const WeightProfile* p = FindProfile(builtins, profile.cast<std::string>());
    if (!p) throw Error(ErrorCode::kConfig, "unknown profile");
    return *p;
  }
  WeightProfile p;
  p.name = "custom";
  for (const auto& [key, weight] : profile.cast<std::map<std::string, double>>()) {
    std::optional<MetricId> m = ParseMetricKey(key);
    if (!m) throw Error(ErrorCode::kConfig, "unknown metric '" + key + "'");
    p.weights[*m] = weight;
  }
  p.Validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_synbench, m) {
  m.doc() = "Benchmark synthetic EHR generators on utility and privacy.";
  m.attr("__version__") = std::string(Version());

  py::register_exception<Error>(m, "SynbenchError");

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&MakeDataset), py::arg("columns"), py::arg("values"),
           "columns: list of (name, kind, role); kind is binary|continuous, "
           "role is feature|outcome|qid")
      .def_property_readonly("columns", &ColumnsOf)
      .def_property_readonly("values",
                             [](const Dataset& d) { return d.values(); })
      .def_property_readonly("rows", &Dataset::rows)
      .def_property_readonly("cols", &Dataset::cols)
      .def_property_readonly("id", [](const Dataset& d) { return d.tag().Id(); });

  m.def(
      "load_dataset",
      [](const std::filesystem::path& path,
         std::optional<std::filesystem::path> schema) {
        return LoadDataset(path, LoadSchema(schema ? *schema
                                                   : SchemaSidecarPath(path)));
      },
      py::arg("path"), py::arg("schema") = py::none());

  m.def(
      "auroc",
      [](const std::vector<double>& scores, const std::vector<double>& labels) {
        return Auroc(scores, labels);
      },
      py::arg("scores"), py::arg("labels"));
  m.def(
      "f1_score",
      [](const std::vector<double>& predicted, const std::vector<double>& truth) {
        return F1Score(predicted, truth);
      },
      py::arg("predicted"), py::arg("truth"));
  m.def(
      "wasserstein_1d",
      [](const std::vector<double>& a, const std::vector<double>& b) {
        return Wasserstein1D(a, b);
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "rank_with_ties",
      [](const std::vector<double>& values, bool higher_is_better) {
        return RankWithTies(values, higher_is_better ? Direction::kHigher
                                                     : Direction::kLower);
      },
      py::arg("values"), py::arg("higher_is_better") = false);

  m.def("builtin_profiles", [] {
    std::vector<std::pair<std::string, std::map<std::string, double>>> out;
    for (const WeightProfile& p : BuiltinProfiles()) {
      std::map<std::string, double> w;
      for (const auto& [metric, weight] : p.weights) {
        w[std::string(MetricKey(metric))] = weight;
      }
      out.emplace_back(p.name, w);
    }
    return out;
  });
  m.def(
      "final_scores",
      [](const std::map<std::string, std::map<std::string, double>>& scores,
         const py::object& profile) {
        RankScores rank_scores;
        for (const auto& [key, models] : scores) {
          std::optional<MetricId> metric = ParseMetricKey(key);
          if (!metric) throw Error(ErrorCode::kConfig, "unknown metric '" + key + "'");
          rank_scores[*metric] = models;
        }
        std::vector<std::pair<std::string, double>> out;
        for (const FinalScore& s : FinalScores(rank_scores, ProfileFrom(profile))) {
          out.emplace_back(s.model, s.score);
        }
        return out;
      },
      py::arg("rank_scores"), py::arg("profile"),
      "rank_scores: {metric: {model: score}}; profile: builtin name or "
      "{metric: weight}. Returns [(model, score)] best first.");

  m.def(
      "dimension_wise_distribution",
      [](const Dataset& real, const Dataset& synth) {
        std::vector<Dataset> s = {synth};
        return DimensionWiseDistribution(real, synth, DwdNormalizer::Fit(real, s));
      },
      py::arg("real"), py::arg("synth"));
  m.def(
      "correlation_distance",
      [](const Dataset& real, const Dataset& synth) {
        return CorrelationDistance(real, synth);
      },
      py::arg("real"), py::arg("synth"));
  m.def(
      "latent_deviation",
      [](const Dataset& real, const Dataset& synth, int clusters,
         double variance_target, uint64_t seed) {
        LatentOptions o;
        o.clusters = clusters;
        o.variance_target = variance_target;
        o.seed = seed;
        return LatentDeviation(real, synth, o).value;
      },
      py::arg("real"), py::arg("synth"), py::arg("clusters") = 3,
      py::arg("variance_target") = 0.8, py::arg("seed") = 0);
  m.def(
      "knowledge_violation",
      [](const Dataset& real, const Dataset& synth, const std::string& group,
         int top_m) {
        return KnowledgeViolation(synth, DeriveKnowledgeRules(real, group, top_m))
            .score;
      },
      py::arg("real"), py::arg("synth"), py::arg("group_feature"),
      py::arg("top_m") = 3);
  m.def(
      "evaluate_tstr",
      [](const Dataset& synth, const Dataset& holdout, int bootstrap,
         uint64_t seed) {
        PredictionOptions o;
        o.bootstrap_resamples = bootstrap;
        return PredictionToDict(
            EvaluateTstr(synth, holdout, LogisticRegression(), o, seed));
      },
      py::arg("synth"), py::arg("real_holdout"), py::arg("bootstrap") = 1000,
      py::arg("seed") = 0);
  m.def(
      "evaluate_trts",
      [](const Dataset& real_train, const Dataset& synth, int bootstrap,
         uint64_t seed) {
        PredictionOptions o;
        o.bootstrap_resamples = bootstrap;
        return PredictionToDict(
            EvaluateTrts(real_train, synth, LogisticRegression(), o, seed));
      },
      py::arg("real_train"), py::arg("synth"), py::arg("bootstrap") = 1000,
      py::arg("seed") = 0);
  m.def(
      "attribute_inference_risk",
      [](const Dataset& real, const Dataset& synth, int k, int known_top_f,
         double closeness, uint64_t seed) {
        AttributeAttackConfig c;
        c.k_neighbors = k;
        c.known_features = DefaultKnownFeatures(real, known_top_f);
        c.closeness_threshold = closeness;
        c.seed = seed;
        return AttributeInferenceRisk(real, synth, real, c).risk;
      },
      py::arg("real"), py::arg("synth"), py::arg("k") = 1,
      py::arg("known_top_f") = 256, py::arg("closeness") = 0.1,
      py::arg("seed") = 0);
  m.def(
      "membership_inference_risk",
      [](const Dataset& members, const Dataset& non_members,
         const Dataset& synth, double theta, uint64_t seed) {
        MembershipAttackConfig c;
        c.distance_threshold = theta;
        c.seed = seed;
        return MembershipInferenceRisk(members, non_members, synth, c).risk;
      },
      py::arg("members"), py::arg("non_members"), py::arg("synth"),
      py::arg("theta") = 2.0, py::arg("seed") = 0);
  m.def(
      "identity_disclosure_risk",
      [](const Dataset& synth, const Dataset& real, const Dataset& population,
         const std::vector<std::string>& qids, double learn_fraction,
         uint64_t seed) {
        DisclosureConfig c;
        c.qids = qids;
        c.learn_fraction = learn_fraction;
        c.seed = seed;
        return IdentityDisclosureRisk(synth, real, population, c).risk;
      },
      py::arg("synth"), py::arg("real"), py::arg("population"),
      py::arg("qids"), py::arg("learn_fraction") = 0.01, py::arg("seed") = 0);
  m.def(
      "sample_marginal",
      [](const Dataset& train, int64_t n_out, const std::string& paradigm,
         uint64_t seed) {
        GenerationRequest r;
        r.n_out = n_out;
        r.paradigm = ParseParadigm(paradigm);
        r.seed = seed;
        return SampleMarginal(train, r);
      },
      py::arg("train"), py::arg("n_out"), py::arg("paradigm") = "combined",
      py::arg("seed") = 0);

  m.def(
      "run_benchmark",
      [](const std::filesystem::path& config_path, std::optional<uint64_t> seed,
         std::optional<int> workers,
         std::optional<std::filesystem::path> output_dir) {
        BenchmarkConfig config = LoadConfig(config_path);
        if (seed) config.seed = *seed;
        if (workers) config.workers = *workers;
        BenchmarkReport report;
        {
          py::gil_scoped_release release;
          report = RunBenchmark(config);
        }
        if (output_dir) WriteReport(report, *output_dir);
        return ReportToJson(report);
      },
      py::arg("config"), py::arg("seed") = py::none(),
      py::arg("workers") = py::none(), py::arg("output_dir") = py::none(),
      "Runs all phases and returns the JSON report text.");
  m.def("config_template", &ConfigTemplate);
}

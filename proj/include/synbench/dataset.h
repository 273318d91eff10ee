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

// Typed tabular data shared by every metric: column schema, an immutable
// record matrix, CSV ingestion and the preprocessing steps applied to real
// data before benchmarking (splitting, [0,1] scaling, rare-feature removal).

#ifndef SYNBENCH_DATASET_H_
#define SYNBENCH_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace synbench {

enum class FeatureKind { kBinary, kContinuous };
enum class FeatureRole { kFeature, kOutcome, kQuasiIdentifier, kIdentifier };

std::string_view FeatureKindName(FeatureKind kind);
std::string_view FeatureRoleName(FeatureRole role);
FeatureKind ParseFeatureKind(std::string_view text);
FeatureRole ParseFeatureRole(std::string_view text);

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kBinary;
  FeatureRole role = FeatureRole::kFeature;

  bool operator==(const FeatureSpec&) const = default;
};

// Ordered, validated list of column specs. Names are unique and at most one
// column is the (binary) outcome.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<FeatureSpec> features);

  const std::vector<FeatureSpec>& features() const { return features_; }
  const FeatureSpec& operator[](size_t i) const { return features_[i]; }
  size_t size() const { return features_.size(); }

  std::optional<size_t> IndexOf(std::string_view name) const;
  // Like IndexOf, but throws kMissingColumn.
  size_t Require(std::string_view name) const;
  std::optional<size_t> OutcomeIndex() const;
  std::vector<size_t> IndicesWithRole(FeatureRole role) const;
  std::vector<size_t> IndicesWithKind(FeatureKind kind) const;
  std::vector<std::string> Names() const;

  // Drops identifier columns, which never take part in metric computations.
  Schema WithoutIdentifiers() const;
  Schema Select(std::span<const size_t> indices) const;

  bool operator==(const Schema& other) const {
    return features_ == other.features_;
  }

 private:
  std::vector<FeatureSpec> features_;
};

enum class Paradigm { kCombined, kSeparate };

std::string_view ParadigmName(Paradigm paradigm);
Paradigm ParseParadigm(std::string_view text);

struct Provenance {
  bool synthetic = false;
  std::string model;
  int run = 0;
  Paradigm paradigm = Paradigm::kCombined;

  static Provenance Real() { return {}; }
  static Provenance Synthetic(std::string model, int run, Paradigm paradigm) {
    return {true, std::move(model), run, paradigm};
  }

  // "real" or "<model>__run<k>__<paradigm>", also used as the CSV file stem.
  std::string Id() const;

  bool operator==(const Provenance&) const = default;
};

// Immutable table of patient records: n_records x n_features. Binary cells
// are exactly 0 or 1, every cell is finite and there is at least one row.
// Identifier columns are never materialized.
class Dataset {
 public:
  Dataset(Schema schema, Eigen::MatrixXd values, Provenance tag = {});

  const Schema& schema() const { return schema_; }
  const Eigen::MatrixXd& values() const { return values_; }
  const Provenance& tag() const { return tag_; }
  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index cols() const { return values_.cols(); }
  double at(Eigen::Index row, Eigen::Index col) const {
    return values_(row, col);
  }
  auto column(Eigen::Index col) const { return values_.col(col); }

  Dataset WithTag(Provenance tag) const;
  Dataset SelectRows(std::span<const size_t> rows) const;
  Dataset SelectColumns(std::span<const size_t> cols) const;
  Dataset DropColumns(std::span<const std::string> names) const;
  // Reorders this dataset's columns to follow `target` (same column set).
  Dataset ConformTo(const Schema& target) const;

 private:
  Schema schema_;
  Eigen::MatrixXd values_;
  Provenance tag_;
};

// Row-wise concatenation; schemas must match.
Dataset ConcatRows(const Dataset& a, const Dataset& b, Provenance tag = {});

enum class MissingPolicy { kReject, kDropRow };

struct LoadOptions {
  MissingPolicy missing = MissingPolicy::kReject;
};

// Reads an RFC-4180 CSV with a header row. Columns are taken in schema order;
// columns in the file that the schema does not list are ignored.
Dataset LoadDataset(const std::filesystem::path& path, const Schema& schema,
                    Provenance tag = {}, const LoadOptions& options = {});
Dataset ParseDataset(std::string_view csv_text, const Schema& schema,
                     Provenance tag = {}, const LoadOptions& options = {});

// Writes values with round-trip precision.
void WriteDataset(const Dataset& dataset, const std::filesystem::path& path);
std::string FormatDatasetCsv(const Dataset& dataset);

// Schema sidecar: {"columns": [{"name", "kind", "role"}, ...]}.
Schema LoadSchema(const std::filesystem::path& path);
Schema ParseSchemaJson(std::string_view json_text);
void WriteSchema(const Schema& schema, const std::filesystem::path& path);
std::string FormatSchemaJson(const Schema& schema);

// Conventional sidecar location: "x.csv" -> "x.schema.json".
std::filesystem::path SchemaSidecarPath(const std::filesystem::path& csv_path);

// Partitions rows into (first, second) with round(ratio * n) rows in `first`.
// With `stratify`, each outcome label lands in `first` within one record of
// its proportional share. Row order within each part follows the input.
std::pair<Dataset, Dataset> Split(const Dataset& dataset, double ratio,
                                  uint64_t seed, bool stratify);

struct ValueRange {
  double min = 0.0;
  double max = 0.0;
};

// Per-continuous-feature ranges learned from real training data.
class NormalizationContext {
 public:
  NormalizationContext() = default;
  explicit NormalizationContext(std::map<std::string, ValueRange> ranges)
      : ranges_(std::move(ranges)) {}

  static NormalizationContext Fit(const Dataset& real);

  const std::map<std::string, ValueRange>& ranges() const { return ranges_; }
  const ValueRange& RangeOf(std::string_view feature) const;

 private:
  std::map<std::string, ValueRange> ranges_;
};

// Maps continuous cells through (v - min) / (max - min) and clamps to [0,1];
// a degenerate column (max == min) maps to 0. Binary cells are unchanged.
Dataset Normalize(const Dataset& dataset, const NormalizationContext& context);
// Inverse of Normalize for in-range values.
Dataset Denormalize(const Dataset& dataset,
                    const NormalizationContext& context);

double Prevalence(const Dataset& dataset, size_t column);
double Prevalence(const Dataset& dataset, std::string_view feature);

// Shannon entropy in bits. Continuous columns use a 10-bin equal-width
// histogram over `histogram_range` (default: the column's own range).
double ColumnEntropy(const Dataset& dataset, size_t column,
                     std::optional<ValueRange> histogram_range = std::nullopt);
double BinaryEntropy(double p);

struct FilterResult {
  Dataset dataset;
  std::vector<std::string> dropped;
};

// Drops binary feature columns whose count of ones is <= min_count.
// Continuous columns and outcome/QID columns are always kept.
FilterResult FilterRareFeatures(const Dataset& dataset, int64_t min_count);

// Predictor columns: everything except the outcome.
std::vector<size_t> PredictorColumns(const Schema& schema);

}  // namespace synbench

#endif  // SYNBENCH_DATASET_H_

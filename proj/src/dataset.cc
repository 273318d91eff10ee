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

#include "synbench/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>

#include "csv.h"
#include "json.hpp"
#include "synbench/error.h"
#include "synbench/random.h"

namespace synbench {
namespace {

constexpr int kEntropyBins = 10;

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  return s;
}

bool IsMissing(std::string_view cell) {
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" ||
         cell == "null";
}

std::optional<double> ParseReal(std::string_view cell) {
  double value = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (first != last && *first == '+') ++first;
  auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc() || result.ptr != last || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string CellLocation(size_t row, std::string_view column) {
  return "row " + std::to_string(row) + ", column '" + std::string(column) +
         "'";
}

}  // namespace

std::string_view FeatureKindName(FeatureKind kind) {
  return kind == FeatureKind::kBinary ? "binary" : "continuous";
}

std::string_view FeatureRoleName(FeatureRole role) {
  switch (role) {
    case FeatureRole::kFeature:
      return "feature";
    case FeatureRole::kOutcome:
      return "outcome";
    case FeatureRole::kQuasiIdentifier:
      return "qid";
    case FeatureRole::kIdentifier:
      return "identifier";
  }
  return "feature";
}

FeatureKind ParseFeatureKind(std::string_view text) {
  if (text == "binary") return FeatureKind::kBinary;
  if (text == "continuous") return FeatureKind::kContinuous;
  throw Error(ErrorCode::kConfig, "unknown feature kind '" +
                                      std::string(text) + "'");
}

FeatureRole ParseFeatureRole(std::string_view text) {
  if (text == "feature") return FeatureRole::kFeature;
  if (text == "outcome") return FeatureRole::kOutcome;
  if (text == "qid") return FeatureRole::kQuasiIdentifier;
  if (text == "identifier") return FeatureRole::kIdentifier;
  throw Error(ErrorCode::kConfig, "unknown feature role '" +
                                      std::string(text) + "'");
}

Schema::Schema(std::vector<FeatureSpec> features)
    : features_(std::move(features)) {
  std::set<std::string_view> names;
  int outcomes = 0;
  for (const FeatureSpec& f : features_) {
    if (f.name.empty()) {
      throw Error(ErrorCode::kConfig, "feature with empty name");
    }
    if (!names.insert(f.name).second) {
      throw Error(ErrorCode::kConfig, "duplicate feature name '" + f.name + "'");
    }
    if (f.role == FeatureRole::kOutcome) {
      ++outcomes;
      if (f.kind != FeatureKind::kBinary) {
        throw Error(ErrorCode::kConfig, "outcome '" + f.name +
                                            "' must be binary");
      }
    }
  }
  if (outcomes > 1) {
    throw Error(ErrorCode::kConfig, "more than one outcome column");
  }
}

std::optional<size_t> Schema::IndexOf(std::string_view name) const {
  for (size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  return std::nullopt;
}

size_t Schema::Require(std::string_view name) const {
  auto index = IndexOf(name);
  if (!index) {
    throw Error(ErrorCode::kMissingColumn,
                "column '" + std::string(name) + "' not in schema");
  }
  return *index;
}

std::optional<size_t> Schema::OutcomeIndex() const {
  auto out = IndicesWithRole(FeatureRole::kOutcome);
  if (out.empty()) return std::nullopt;
  return out.front();
}

std::vector<size_t> Schema::IndicesWithRole(FeatureRole role) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].role == role) out.push_back(i);
  }
  return out;
}

std::vector<size_t> Schema::IndicesWithKind(FeatureKind kind) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < features_.size(); ++i) {
    if (features_[i].kind == kind) out.push_back(i);
  }
  return out;
}

std::vector<std::string> Schema::Names() const {
  std::vector<std::string> out;
  out.reserve(features_.size());
  for (const FeatureSpec& f : features_) out.push_back(f.name);
  return out;
}

Schema Schema::WithoutIdentifiers() const {
  std::vector<FeatureSpec> kept;
  for (const FeatureSpec& f : features_) {
    if (f.role != FeatureRole::kIdentifier) kept.push_back(f);
  }
  return Schema(std::move(kept));
}

Schema Schema::Select(std::span<const size_t> indices) const {
  std::vector<FeatureSpec> kept;
  kept.reserve(indices.size());
  for (size_t i : indices) kept.push_back(features_.at(i));
  return Schema(std::move(kept));
}

std::string_view ParadigmName(Paradigm paradigm) {
  return paradigm == Paradigm::kCombined ? "combined" : "separate";
}

Paradigm ParseParadigm(std::string_view text) {
  if (text == "combined") return Paradigm::kCombined;
  if (text == "separate") return Paradigm::kSeparate;
  throw Error(ErrorCode::kConfig, "unknown paradigm '" + std::string(text) +
                                      "'");
}

std::string Provenance::Id() const {
  if (!synthetic) return "real";
  return model + "__run" + std::to_string(run) + "__" +
         std::string(ParadigmName(paradigm));
}

Dataset::Dataset(Schema schema, Eigen::MatrixXd values, Provenance tag)
    : schema_(std::move(schema)),
      values_(std::move(values)),
      tag_(std::move(tag)) {
  if (static_cast<size_t>(values_.cols()) != schema_.size()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "matrix has " + std::to_string(values_.cols()) +
                    " columns but schema lists " +
                    std::to_string(schema_.size()));
  }
  if (values_.rows() == 0) {
    throw Error(ErrorCode::kEmptyFile, "dataset has no rows");
  }
  if (!schema_.IndicesWithRole(FeatureRole::kIdentifier).empty()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "identifier columns cannot be materialized in a dataset");
  }
  for (Eigen::Index c = 0; c < values_.cols(); ++c) {
    bool binary = schema_[static_cast<size_t>(c)].kind == FeatureKind::kBinary;
    for (Eigen::Index r = 0; r < values_.rows(); ++r) {
      double v = values_(r, c);
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kUnparseableReal,
                    "non-finite value at " +
                        CellLocation(static_cast<size_t>(r),
                                     schema_[static_cast<size_t>(c)].name));
      }
      if (binary && v != 0.0 && v != 1.0) {
        throw Error(ErrorCode::kBinaryDomainViolation,
                    "value " + csv::FormatDouble(v) + " at " +
                        CellLocation(static_cast<size_t>(r),
                                     schema_[static_cast<size_t>(c)].name));
      }
    }
  }
}

Dataset Dataset::WithTag(Provenance tag) const {
  Dataset copy = *this;
  copy.tag_ = std::move(tag);
  return copy;
}

Dataset Dataset::SelectRows(std::span<const size_t> rows) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), values_.cols());
  for (size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) =
        values_.row(static_cast<Eigen::Index>(rows[i]));
  }
  return Dataset(schema_, std::move(out), tag_);
}

Dataset Dataset::SelectColumns(std::span<const size_t> cols) const {
  Eigen::MatrixXd out(values_.rows(), static_cast<Eigen::Index>(cols.size()));
  for (size_t i = 0; i < cols.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) =
        values_.col(static_cast<Eigen::Index>(cols[i]));
  }
  return Dataset(schema_.Select(cols), std::move(out), tag_);
}

Dataset Dataset::DropColumns(std::span<const std::string> names) const {
  std::set<std::string_view> drop(names.begin(), names.end());
  std::vector<size_t> keep;
  for (size_t i = 0; i < schema_.size(); ++i) {
    if (!drop.contains(schema_[i].name)) keep.push_back(i);
  }
  return SelectColumns(keep);
}

Dataset Dataset::ConformTo(const Schema& target) const {
  if (target.size() != schema_.size()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "column count differs: " + std::to_string(schema_.size()) +
                    " vs " + std::to_string(target.size()));
  }
  std::vector<size_t> order;
  order.reserve(target.size());
  for (const FeatureSpec& f : target.features()) {
    auto index = schema_.IndexOf(f.name);
    if (!index || schema_[*index].kind != f.kind) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "column '" + f.name + "' missing or of different kind");
    }
    order.push_back(*index);
  }
  Dataset out = SelectColumns(order);
  return Dataset(target, out.values(), tag_);
}

Dataset ConcatRows(const Dataset& a, const Dataset& b, Provenance tag) {
  if (!(a.schema() == b.schema())) {
    throw Error(ErrorCode::kSchemaMismatch, "cannot concatenate datasets");
  }
  Eigen::MatrixXd out(a.rows() + b.rows(), a.cols());
  out.topRows(a.rows()) = a.values();
  out.bottomRows(b.rows()) = b.values();
  return Dataset(a.schema(), std::move(out), std::move(tag));
}

Dataset ParseDataset(std::string_view csv_text, const Schema& schema,
                     Provenance tag, const LoadOptions& options) {
  std::vector<csv::Row> records = csv::Parse(csv_text);
  if (records.empty()) throw Error(ErrorCode::kEmptyFile, "no header row");
  const csv::Row& header = records.front();

  std::unordered_map<std::string, size_t> header_index;
  for (size_t i = 0; i < header.size(); ++i) {
    header_index.emplace(std::string(Trim(header[i])), i);
  }
  for (const FeatureSpec& f : schema.features()) {
    if (!header_index.contains(f.name)) {
      throw Error(ErrorCode::kMissingColumn,
                  "column '" + f.name + "' not present in header");
    }
  }

  Schema materialized = schema.WithoutIdentifiers();
  std::vector<size_t> source;
  for (const FeatureSpec& f : materialized.features()) {
    source.push_back(header_index.at(f.name));
  }

  std::vector<double> cells;
  cells.reserve((records.size() - 1) * source.size());
  size_t kept_rows = 0;
  std::vector<double> row_values(source.size());
  for (size_t r = 1; r < records.size(); ++r) {
    const csv::Row& record = records[r];
    const size_t data_row = r - 1;
    if (record.size() != header.size()) {
      throw Error(ErrorCode::kMalformedCsv,
                  "row " + std::to_string(data_row) + " has " +
                      std::to_string(record.size()) + " fields, header has " +
                      std::to_string(header.size()));
    }
    bool drop = false;
    for (size_t c = 0; c < source.size(); ++c) {
      const FeatureSpec& f = materialized[c];
      std::string_view cell = Trim(record[source[c]]);
      if (IsMissing(cell)) {
        if (options.missing == MissingPolicy::kDropRow) {
          drop = true;
          break;
        }
        throw Error(ErrorCode::kMissingValue,
                    "missing value at " + CellLocation(data_row, f.name));
      }
      std::optional<double> value = ParseReal(cell);
      if (f.kind == FeatureKind::kBinary) {
        if (!value || (*value != 0.0 && *value != 1.0)) {
          throw Error(ErrorCode::kBinaryDomainViolation,
                      "value '" + std::string(cell) + "' at " +
                          CellLocation(data_row, f.name));
        }
      } else if (!value) {
        throw Error(ErrorCode::kUnparseableReal,
                    "value '" + std::string(cell) + "' at " +
                        CellLocation(data_row, f.name));
      }
      row_values[c] = *value;
    }
    if (drop) continue;
    cells.insert(cells.end(), row_values.begin(), row_values.end());
    ++kept_rows;
  }
  if (kept_rows == 0) throw Error(ErrorCode::kEmptyFile, "no data rows");

  Eigen::MatrixXd values(static_cast<Eigen::Index>(kept_rows),
                         static_cast<Eigen::Index>(source.size()));
  for (size_t r = 0; r < kept_rows; ++r) {
    for (size_t c = 0; c < source.size(); ++c) {
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          cells[r * source.size() + c];
    }
  }
  return Dataset(std::move(materialized), std::move(values), std::move(tag));
}

Dataset LoadDataset(const std::filesystem::path& path, const Schema& schema,
                    Provenance tag, const LoadOptions& options) {
  std::string text = csv::ReadFile(path);
  try {
    return ParseDataset(text, schema, std::move(tag), options);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string FormatDatasetCsv(const Dataset& dataset) {
  std::string out = csv::FormatRow(dataset.schema().Names());
  csv::Row row(dataset.schema().size());
  for (Eigen::Index r = 0; r < dataset.rows(); ++r) {
    for (Eigen::Index c = 0; c < dataset.cols(); ++c) {
      double v = dataset.at(r, c);
      if (dataset.schema()[static_cast<size_t>(c)].kind ==
          FeatureKind::kBinary) {
        row[static_cast<size_t>(c)] = v == 1.0 ? "1" : "0";
      } else {
        row[static_cast<size_t>(c)] = csv::FormatDouble(v);
      }
    }
    out += csv::FormatRow(row);
  }
  return out;
}

void WriteDataset(const Dataset& dataset, const std::filesystem::path& path) {
  csv::WriteFile(path, FormatDatasetCsv(dataset));
}

Schema ParseSchemaJson(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("schema is not JSON: ") +
                                        e.what());
  }
  const nlohmann::json* columns = &doc;
  if (doc.is_object()) {
    if (!doc.contains("columns")) {
      throw Error(ErrorCode::kConfig, "schema object lacks 'columns'");
    }
    columns = &doc["columns"];
  }
  if (!columns->is_array()) {
    throw Error(ErrorCode::kConfig, "schema columns must be an array");
  }
  std::vector<FeatureSpec> features;
  for (const auto& item : *columns) {
    if (!item.is_object() || !item.contains("name") || !item.contains("kind")) {
      throw Error(ErrorCode::kConfig,
                  "schema entries need 'name' and 'kind' fields");
    }
    FeatureSpec spec;
    spec.name = item["name"].get<std::string>();
    spec.kind = ParseFeatureKind(item["kind"].get<std::string>());
    spec.role = ParseFeatureRole(item.value("role", std::string("feature")));
    features.push_back(std::move(spec));
  }
  return Schema(std::move(features));
}

Schema LoadSchema(const std::filesystem::path& path) {
  return ParseSchemaJson(csv::ReadFile(path));
}

std::string FormatSchemaJson(const Schema& schema) {
  nlohmann::json columns = nlohmann::json::array();
  for (const FeatureSpec& f : schema.features()) {
    columns.push_back({{"name", f.name},
                       {"kind", std::string(FeatureKindName(f.kind))},
                       {"role", std::string(FeatureRoleName(f.role))}});
  }
  nlohmann::json doc = {{"columns", columns}};
  return doc.dump(2) + "\n";
}

void WriteSchema(const Schema& schema, const std::filesystem::path& path) {
  csv::WriteFile(path, FormatSchemaJson(schema));
}

std::filesystem::path SchemaSidecarPath(const std::filesystem::path& csv_path) {
  std::filesystem::path out = csv_path;
  out.replace_extension(".schema.json");
  return out;
}

std::pair<Dataset, Dataset> Split(const Dataset& dataset, double ratio,
                                  uint64_t seed, bool stratify) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "split ratio must lie in (0,1), got " +
                    csv::FormatDouble(ratio));
  }
  const size_t n = static_cast<size_t>(dataset.rows());
  const size_t target = static_cast<size_t>(std::llround(ratio * n));
  if (target == 0 || target == n) {
    throw Error(ErrorCode::kInvalidArgument,
                "split of " + std::to_string(n) + " rows at ratio " +
                    csv::FormatDouble(ratio) + " leaves an empty part");
  }
  Rng rng(seed);
  std::vector<size_t> first;

  if (stratify) {
    auto outcome = dataset.schema().OutcomeIndex();
    if (!outcome) {
      throw Error(ErrorCode::kInvalidArgument,
                  "stratified split requires an outcome column");
    }
    std::array<std::vector<size_t>, 2> groups;
    for (size_t r = 0; r < n; ++r) {
      groups[dataset.at(static_cast<Eigen::Index>(r),
                        static_cast<Eigen::Index>(*outcome)) == 1.0]
          .push_back(r);
    }
    std::array<size_t, 2> quota{};
    std::array<double, 2> remainder{};
    size_t assigned = 0;
    for (int g = 0; g < 2; ++g) {
      double exact = ratio * static_cast<double>(groups[g].size());
      quota[g] = static_cast<size_t>(std::floor(exact));
      remainder[g] = exact - static_cast<double>(quota[g]);
      assigned += quota[g];
    }
    // Largest remainder first; label 0 wins ties.
    std::array<int, 2> order = {0, 1};
    if (remainder[1] > remainder[0]) order = {1, 0};
    for (int g : order) {
      if (assigned < target && quota[g] < groups[g].size()) {
        ++quota[g];
        ++assigned;
      }
    }
    for (int g = 0; g < 2; ++g) {
      rng.Shuffle(groups[g].begin(), groups[g].end());
      first.insert(first.end(), groups[g].begin(),
                   groups[g].begin() + static_cast<std::ptrdiff_t>(quota[g]));
    }
  } else {
    std::vector<size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    rng.Shuffle(all.begin(), all.end());
    first.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(target));
  }

  std::sort(first.begin(), first.end());
  std::vector<bool> in_first(n, false);
  for (size_t r : first) in_first[r] = true;
  std::vector<size_t> second;
  second.reserve(n - first.size());
  for (size_t r = 0; r < n; ++r) {
    if (!in_first[r]) second.push_back(r);
  }
  return {dataset.SelectRows(first), dataset.SelectRows(second)};
}

NormalizationContext NormalizationContext::Fit(const Dataset& real) {
  std::map<std::string, ValueRange> ranges;
  for (size_t c : real.schema().IndicesWithKind(FeatureKind::kContinuous)) {
    auto col = real.column(static_cast<Eigen::Index>(c));
    ranges[real.schema()[c].name] = {col.minCoeff(), col.maxCoeff()};
  }
  return NormalizationContext(std::move(ranges));
}

const ValueRange& NormalizationContext::RangeOf(
    std::string_view feature) const {
  auto it = ranges_.find(std::string(feature));
  if (it == ranges_.end()) {
    throw Error(ErrorCode::kMissingColumn,
                "normalization context lacks feature '" +
                    std::string(feature) + "'");
  }
  return it->second;
}

Dataset Normalize(const Dataset& dataset, const NormalizationContext& context) {
  Eigen::MatrixXd values = dataset.values();
  for (size_t c : dataset.schema().IndicesWithKind(FeatureKind::kContinuous)) {
    const ValueRange& range = context.RangeOf(dataset.schema()[c].name);
    const double width = range.max - range.min;
    auto col = values.col(static_cast<Eigen::Index>(c));
    for (Eigen::Index r = 0; r < col.size(); ++r) {
      col(r) = width > 0.0
                   ? std::clamp((col(r) - range.min) / width, 0.0, 1.0)
                   : 0.0;
    }
  }
  return Dataset(dataset.schema(), std::move(values), dataset.tag());
}

Dataset Denormalize(const Dataset& dataset,
                    const NormalizationContext& context) {
  Eigen::MatrixXd values = dataset.values();
  for (size_t c : dataset.schema().IndicesWithKind(FeatureKind::kContinuous)) {
    const ValueRange& range = context.RangeOf(dataset.schema()[c].name);
    auto col = values.col(static_cast<Eigen::Index>(c));
    col = (col.array() * (range.max - range.min) + range.min).matrix();
  }
  return Dataset(dataset.schema(), std::move(values), dataset.tag());
}

double Prevalence(const Dataset& dataset, size_t column) {
  if (dataset.schema()[column].kind != FeatureKind::kBinary) {
    throw Error(ErrorCode::kInvalidArgument,
                "prevalence of non-binary feature '" +
                    dataset.schema()[column].name + "'");
  }
  return dataset.column(static_cast<Eigen::Index>(column)).sum() /
         static_cast<double>(dataset.rows());
}

double Prevalence(const Dataset& dataset, std::string_view feature) {
  return Prevalence(dataset, dataset.schema().Require(feature));
}

double BinaryEntropy(double p) {
  auto term = [](double q) { return q > 0.0 ? -q * std::log2(q) : 0.0; };
  return term(p) + term(1.0 - p);
}

double ColumnEntropy(const Dataset& dataset, size_t column,
                     std::optional<ValueRange> histogram_range) {
  auto col = dataset.column(static_cast<Eigen::Index>(column));
  const double n = static_cast<double>(col.size());
  if (dataset.schema()[column].kind == FeatureKind::kBinary) {
    return BinaryEntropy(col.sum() / n);
  }
  ValueRange range =
      histogram_range.value_or(ValueRange{col.minCoeff(), col.maxCoeff()});
  const double width = range.max - range.min;
  if (!(width > 0.0)) return 0.0;
  std::array<int64_t, kEntropyBins> counts{};
  for (Eigen::Index r = 0; r < col.size(); ++r) {
    auto bin = static_cast<int64_t>(
        std::floor((col(r) - range.min) / width * kEntropyBins));
    counts[static_cast<size_t>(std::clamp<int64_t>(bin, 0, kEntropyBins - 1))]++;
  }
  double entropy = 0.0;
  for (int64_t count : counts) {
    if (count == 0) continue;
    double p = static_cast<double>(count) / n;
    entropy -= p * std::log2(p);
  }
  return entropy;
}

FilterResult FilterRareFeatures(const Dataset& dataset, int64_t min_count) {
  if (min_count < 0) {
    throw Error(ErrorCode::kInvalidArgument, "min_count must be >= 0");
  }
  std::vector<std::string> dropped;
  for (size_t c = 0; c < dataset.schema().size(); ++c) {
    const FeatureSpec& f = dataset.schema()[c];
    if (f.kind != FeatureKind::kBinary || f.role != FeatureRole::kFeature) {
      continue;
    }
    double count = dataset.column(static_cast<Eigen::Index>(c)).sum();
    if (count <= static_cast<double>(min_count)) dropped.push_back(f.name);
  }
  return {dataset.DropColumns(dropped), dropped};
}

std::vector<size_t> PredictorColumns(const Schema& schema) {
  std::vector<size_t> out;
  for (size_t i = 0; i < schema.size(); ++i) {
    if (schema[i].role != FeatureRole::kOutcome) out.push_back(i);
  }
  return out;
}

}  // namespace synbench

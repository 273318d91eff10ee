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

#include "synbench/error.h"

namespace synbench {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kConfig:
      return "ConfigError";
    case ErrorCode::kMissingWeight:
      return "MissingWeight";
    case ErrorCode::kIo:
      return "IoError";
    case ErrorCode::kMalformedCsv:
      return "MalformedCsv";
    case ErrorCode::kEmptyFile:
      return "EmptyFile";
    case ErrorCode::kMissingColumn:
      return "MissingColumn";
    case ErrorCode::kMissingValue:
      return "MissingValue";
    case ErrorCode::kBinaryDomainViolation:
      return "BinaryDomainViolation";
    case ErrorCode::kUnparseableReal:
      return "UnparseableReal";
    case ErrorCode::kSchemaMismatch:
      return "SchemaMismatch";
    case ErrorCode::kPopulationCoverage:
      return "PopulationCoverage";
    case ErrorCode::kSingleClass:
      return "SingleClass";
    case ErrorCode::kEmptySample:
      return "EmptySample";
    case ErrorCode::kDegenerateWeights:
      return "DegenerateWeights";
  }
  return "Unknown";
}

ErrorCategory CategoryOf(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
    case ErrorCode::kMissingWeight:
      return ErrorCategory::kConfig;
    case ErrorCode::kIo:
    case ErrorCode::kMalformedCsv:
    case ErrorCode::kEmptyFile:
    case ErrorCode::kMissingColumn:
    case ErrorCode::kMissingValue:
    case ErrorCode::kBinaryDomainViolation:
    case ErrorCode::kUnparseableReal:
    case ErrorCode::kSchemaMismatch:
    case ErrorCode::kPopulationCoverage:
      return ErrorCategory::kData;
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kSingleClass:
    case ErrorCode::kEmptySample:
    case ErrorCode::kDegenerateWeights:
      return ErrorCategory::kMetric;
  }
  return ErrorCategory::kMetric;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace synbench

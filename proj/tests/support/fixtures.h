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

// Simulated EHR tables for tests. Codes are driven by two latent factors so
// they correlate, a few codes are exclusive to one sex, two lab values
// follow the first factor and the outcome depends on both factors.

#ifndef SYNBENCH_TESTS_SUPPORT_FIXTURES_H_
#define SYNBENCH_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "synbench/dataset.h"

namespace synbench::testing {

struct FixtureOptions {
  int64_t rows = 1000;
  int codes = 20;
  uint64_t seed = 1;
  bool with_outcome = true;
};

// Columns: sex, race, age (qid); c00.. (codes); f0..f2 (sex=1 only);
// m0..m2 (sex=0 only); lab0, lab1 (continuous); outcome.
Schema EhrSchema(const FixtureOptions& options);
Dataset MakeEhrFixture(const FixtureOptions& options);

std::vector<std::string> EhrQids();

// Flips each binary cell with probability `flip` and adds uniform noise of
// half-width `jitter` (in column units) to continuous cells.
Dataset Perturb(const Dataset& d, double flip, double jitter, uint64_t seed);

// Small random table of binary and continuous columns with an outcome.
Dataset RandomTable(int64_t rows, int binary, int continuous, uint64_t seed);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace synbench::testing

#endif  // SYNBENCH_TESTS_SUPPORT_FIXTURES_H_

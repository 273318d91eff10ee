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

#ifndef SYNBENCH_BASELINE_H_
#define SYNBENCH_BASELINE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "synbench/dataset.h"
#include "synbench/utility_metrics.h"

namespace synbench {

inline constexpr char kBaselineModel[] = "Baseline";

struct GenerationRequest {
  int64_t n_out = 0;
  Paradigm paradigm = Paradigm::kCombined;
  uint64_t seed = 0;
  // Recorded in the provenance tag of the output.
  int run_index = 1;
};

// Samples every column independently from its training marginal: binary
// columns as Bernoulli(prevalence), continuous columns by drawing observed
// values with replacement. Under Separate, each outcome stratum is sampled
// from its own marginals and the training label proportion is kept.
Dataset SampleMarginal(const Dataset& train, const GenerationRequest& request);

// Indices of the `keep` lowest scores, ordered by (score, index).
std::vector<size_t> SelectTopCandidates(std::span<const double> scores,
                                        size_t keep);

// Scores each candidate with the dimension-wise distribution metric against
// `real` (normalizer fitted over all candidates) and keeps the best `keep`.
std::vector<size_t> SelectTopCandidates(const Dataset& real,
                                        std::span<const Dataset> candidates,
                                        size_t keep, Paradigm paradigm,
                                        std::vector<double>* scores = nullptr);

}  // namespace synbench

#endif  // SYNBENCH_BASELINE_H_

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

#include "synbench/baseline.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "synbench/error.h"
#include "synbench/random.h"

namespace synbench {
namespace {

// Fills rows [first, first + count) of `out`, column by column, from the
// marginals of `source`. Columns in `skip` are left untouched.
void FillFromMarginals(const Dataset& source, Eigen::Index first,
                       Eigen::Index count, std::optional<size_t> skip,
                       Rng& rng, Eigen::MatrixXd& out) {
  for (size_t c = 0; c < source.schema().size(); ++c) {
    if (skip && *skip == c) continue;
    auto col = source.column(static_cast<Eigen::Index>(c));
    if (source.schema()[c].kind == FeatureKind::kBinary) {
      const double p = col.sum() / static_cast<double>(col.size());
      for (Eigen::Index r = 0; r < count; ++r) {
        out(first + r, static_cast<Eigen::Index>(c)) =
            rng.Bernoulli(p) ? 1.0 : 0.0;
      }
    } else {
      const size_t n = static_cast<size_t>(col.size());
      for (Eigen::Index r = 0; r < count; ++r) {
        out(first + r, static_cast<Eigen::Index>(c)) =
            col(static_cast<Eigen::Index>(rng.UniformIndex(n)));
      }
    }
  }
}

}  // namespace

Dataset SampleMarginal(const Dataset& train, const GenerationRequest& request) {
  if (request.n_out <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "n_out must be positive");
  }
  Rng rng(request.seed);
  const Eigen::Index n_out = request.n_out;
  Eigen::MatrixXd out(n_out, train.cols());
  Provenance tag =
      Provenance::Synthetic(kBaselineModel, request.run_index, request.paradigm);

  if (request.paradigm == Paradigm::kCombined) {
    FillFromMarginals(train, 0, n_out, std::nullopt, rng, out);
    return Dataset(train.schema(), std::move(out), std::move(tag));
  }

  auto outcome = train.schema().OutcomeIndex();
  if (!outcome) {
    throw Error(ErrorCode::kInvalidArgument,
                "separate paradigm requires an outcome column");
  }
  std::array<std::vector<size_t>, 2> strata;
  auto labels = train.column(static_cast<Eigen::Index>(*outcome));
  for (Eigen::Index r = 0; r < labels.size(); ++r) {
    strata[labels(r) == 1.0].push_back(static_cast<size_t>(r));
  }
  if (strata[0].empty() || strata[1].empty()) {
    throw Error(ErrorCode::kSingleClass,
                "separate paradigm needs both outcome labels in training data");
  }
  const double p_pos = static_cast<double>(strata[1].size()) /
                       static_cast<double>(train.rows());
  const Eigen::Index n_pos = static_cast<Eigen::Index>(
      std::llround(p_pos * static_cast<double>(n_out)));
  const std::array<Eigen::Index, 2> sizes = {n_out - n_pos, n_pos};
  Eigen::Index first = 0;
  for (int label = 0; label < 2; ++label) {
    if (sizes[label] == 0) continue;
    Dataset stratum = train.SelectRows(strata[label]);
    FillFromMarginals(stratum, first, sizes[label], *outcome, rng, out);
    out.block(first, static_cast<Eigen::Index>(*outcome), sizes[label], 1)
        .setConstant(label);
    first += sizes[label];
  }
  std::vector<size_t> order(static_cast<size_t>(n_out));
  std::iota(order.begin(), order.end(), 0);
  rng.Shuffle(order.begin(), order.end());
  Eigen::MatrixXd shuffled(n_out, train.cols());
  for (size_t i = 0; i < order.size(); ++i) {
    shuffled.row(static_cast<Eigen::Index>(i)) =
        out.row(static_cast<Eigen::Index>(order[i]));
  }
  return Dataset(train.schema(), std::move(shuffled), std::move(tag));
}

std::vector<size_t> SelectTopCandidates(std::span<const double> scores,
                                        size_t keep) {
  if (keep > scores.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot keep " + std::to_string(keep) + " of " +
                    std::to_string(scores.size()) + " candidates");
  }
  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return scores[a] < scores[b];
  });
  order.resize(keep);
  return order;
}

std::vector<size_t> SelectTopCandidates(const Dataset& real,
                                        std::span<const Dataset> candidates,
                                        size_t keep, Paradigm paradigm,
                                        std::vector<double>* scores) {
  DwdNormalizer normalizer = DwdNormalizer::Fit(real, candidates);
  std::vector<double> values;
  values.reserve(candidates.size());
  for (const Dataset& c : candidates) {
    values.push_back(DimensionWiseDistribution(real, c, normalizer, paradigm));
  }
  std::vector<size_t> kept = SelectTopCandidates(values, keep);
  if (scores) *scores = std::move(values);
  return kept;
}

}  // namespace synbench

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

#ifndef SYNBENCH_RANDOM_H_
#define SYNBENCH_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <random>
#include <utility>

namespace synbench {

// Seed mixing for deriving independent streams, e.g. one per (run, metric).
uint64_t MixSeed(uint64_t seed, uint64_t stream);
uint64_t MixSeed(uint64_t seed, std::initializer_list<uint64_t> streams);

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; all distributions are implemented here
// rather than with <random> distributions, whose algorithms vary between
// standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform01();

  // Uniform on {0, ..., n - 1}; n must be positive.
  size_t UniformIndex(size_t n);

  bool Bernoulli(double p) { return Uniform01() < p; }

  // Inverse-CDF draw from the triangular distribution on [lo, hi].
  double Triangular(double lo, double mode, double hi);

  template <typename RandomIt>
  void Shuffle(RandomIt first, RandomIt last) {
    auto n = static_cast<size_t>(std::distance(first, last));
    for (size_t i = n; i > 1; --i) {
      size_t j = UniformIndex(i);
      using std::swap;
      swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace synbench

#endif  // SYNBENCH_RANDOM_H_

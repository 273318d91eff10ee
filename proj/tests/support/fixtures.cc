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

#include "fixtures.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <unistd.h>

#include "synbench/random.h"

namespace synbench::testing {
namespace {

double Normal(Rng& rng) {
  double u = 1.0 - rng.Uniform01();
  double v = rng.Uniform01();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

double Sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

std::string CodeName(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "c%02d", i);
  return buf;
}

}  // namespace

Schema EhrSchema(const FixtureOptions& options) {
  std::vector<FeatureSpec> f = {
      {"sex", FeatureKind::kBinary, FeatureRole::kQuasiIdentifier},
      {"race", FeatureKind::kBinary, FeatureRole::kQuasiIdentifier},
      {"age", FeatureKind::kContinuous, FeatureRole::kQuasiIdentifier},
  };
  for (int i = 0; i < options.codes; ++i) {
    f.push_back({CodeName(i), FeatureKind::kBinary, FeatureRole::kFeature});
  }
  for (const char* name : {"f0", "f1", "f2", "m0", "m1", "m2"}) {
    f.push_back({name, FeatureKind::kBinary, FeatureRole::kFeature});
  }
  f.push_back({"lab0", FeatureKind::kContinuous, FeatureRole::kFeature});
  f.push_back({"lab1", FeatureKind::kContinuous, FeatureRole::kFeature});
  if (options.with_outcome) {
    f.push_back({"outcome", FeatureKind::kBinary, FeatureRole::kOutcome});
  }
  return Schema(std::move(f));
}

Dataset MakeEhrFixture(const FixtureOptions& options) {
  Schema schema = EhrSchema(options);
  Rng rng(options.seed);
  Eigen::MatrixXd v(options.rows, static_cast<Eigen::Index>(schema.size()));
  for (Eigen::Index r = 0; r < options.rows; ++r) {
    const double z1 = Normal(rng);
    const double z2 = Normal(rng);
    Eigen::Index c = 0;
    const double sex = rng.Bernoulli(0.5);
    v(r, c++) = sex;
    v(r, c++) = rng.Bernoulli(0.3);
    v(r, c++) = std::clamp(std::round(50.0 + 12.0 * z1 + 6.0 * Normal(rng)),
                           18.0, 90.0);
    for (int i = 0; i < options.codes; ++i) {
      const double base = -2.2 + 0.08 * (i % 7);
      const double load = i % 2 == 0 ? 1.6 : -0.4;
      const double load2 = i % 3 == 0 ? 1.3 : 0.2;
      v(r, c++) = rng.Bernoulli(Sigmoid(base + load * z1 + load2 * z2));
    }
    for (int i = 0; i < 3; ++i) {
      v(r, c++) = sex == 1.0 ? rng.Bernoulli(Sigmoid(-1.6 + 0.8 * z2)) : 0.0;
    }
    for (int i = 0; i < 3; ++i) {
      v(r, c++) = sex == 0.0 ? rng.Bernoulli(Sigmoid(-1.6 + 0.8 * z2)) : 0.0;
    }
    v(r, c++) = 100.0 + 15.0 * z1 + 5.0 * Normal(rng);
    v(r, c++) = 4.0 + 0.8 * z1 - 0.6 * z2 + 0.4 * Normal(rng);
    if (options.with_outcome) {
      v(r, c++) = rng.Bernoulli(Sigmoid(-0.6 + 1.8 * z1 - 1.2 * z2));
    }
  }
  return Dataset(std::move(schema), std::move(v));
}

std::vector<std::string> EhrQids() { return {"sex", "race", "age"}; }

Dataset Perturb(const Dataset& d, double flip, double jitter, uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd v = d.values();
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    const bool binary =
        d.schema()[static_cast<size_t>(c)].kind == FeatureKind::kBinary;
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      if (binary) {
        if (rng.Bernoulli(flip)) v(r, c) = 1.0 - v(r, c);
      } else {
        v(r, c) += jitter * (2.0 * rng.Uniform01() - 1.0);
      }
    }
  }
  return Dataset(d.schema(), std::move(v), d.tag());
}

Dataset RandomTable(int64_t rows, int binary, int continuous, uint64_t seed) {
  std::vector<FeatureSpec> f;
  for (int i = 0; i < binary; ++i) {
    f.push_back({"b" + std::to_string(i), FeatureKind::kBinary,
                 FeatureRole::kFeature});
  }
  for (int i = 0; i < continuous; ++i) {
    f.push_back({"x" + std::to_string(i), FeatureKind::kContinuous,
                 FeatureRole::kFeature});
  }
  f.push_back({"y", FeatureKind::kBinary, FeatureRole::kOutcome});
  Rng rng(seed);
  Eigen::MatrixXd v(rows, binary + continuous + 1);
  for (Eigen::Index r = 0; r < rows; ++r) {
    Eigen::Index c = 0;
    for (int i = 0; i < binary; ++i) v(r, c++) = rng.Bernoulli(0.4);
    for (int i = 0; i < continuous; ++i) v(r, c++) = rng.Uniform01();
    v(r, c) = r % 2;
  }
  return Dataset(Schema(std::move(f)), std::move(v));
}

TempDir::TempDir(const std::string& prefix) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          (prefix + "-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace synbench::testing

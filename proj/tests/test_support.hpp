// Copyright 2026 The WVE Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Shared fixtures for the test binaries.

#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "wve/rng.hpp"
#include "wve/tabular.hpp"

namespace wve::testing {

inline FeatureMatrix SyntheticMatrix(std::size_t n, std::uint64_t seed, double noise = 0.1) {
  SynthSpec spec;
  spec.n = n;
  spec.seed = seed;
  spec.noise_rate = noise;
  return EncodeRecords(GenerateSynthetic(spec));
}

struct Holdout {
  FeatureMatrix train;
  FeatureMatrix test;
};

inline Holdout SyntheticHoldout(std::size_t n, std::uint64_t seed, double noise = 0.1) {
  auto [train, test] = StratifiedSplit(SyntheticMatrix(n, seed, noise), SplitSpec{0.8, seed, true});
  return {std::move(train), std::move(test)};
}

// Integer-valued columns in [0, levels) with a noisy threshold label.
inline FeatureMatrix LatticeMatrix(std::size_t n, std::size_t cols, std::uint64_t levels,
                                   std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> values(n * cols);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    double score = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      const double v = static_cast<double>(rng.Below(levels));
      values[i * cols + j] = v;
      score += (j % 2 == 0 ? 1.0 : -0.5) * v;
    }
    const int clean = score > 0.25 * static_cast<double>(levels * cols) ? 1 : 0;
    labels[i] = rng.Bernoulli(0.1) ? 1 - clean : clean;
  }
  return MakeMatrix(n, cols, std::move(values), std::move(labels));
}

inline std::size_t MaxDistinct(const FeatureMatrix& m) {
  std::size_t most = 0;
  for (std::size_t j = 0; j < m.cols; ++j) {
    std::set<double> seen;
    for (std::size_t i = 0; i < m.rows; ++i) seen.insert(m.at(i, j));
    most = std::max(most, seen.size());
  }
  return most;
}

inline std::vector<double> Targets(const FeatureMatrix& m) {
  return std::vector<double>(m.labels.begin(), m.labels.end());
}

}  // namespace wve::testing

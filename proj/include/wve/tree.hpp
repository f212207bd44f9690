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

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "wve/objective.hpp"
#include "wve/tabular.hpp"

namespace wve {

inline constexpr int kUnlimitedDepth = std::numeric_limits<int>::max();

enum class Criterion { kGini, kVariance, kBoostGain };

struct MaxFeatures {
  enum class Mode { kAll, kSqrt, kCount };
  Mode mode = Mode::kAll;
  std::size_t count = 0;

  static MaxFeatures All() { return {}; }
  static MaxFeatures Sqrt() { return {Mode::kSqrt, 0}; }
  static MaxFeatures Count(std::size_t k) { return {Mode::kCount, k}; }
  std::size_t Resolve(std::size_t width) const;
};

struct GrowthParams {
  int max_depth = kUnlimitedDepth;
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  MaxFeatures max_features;
  Criterion criterion = Criterion::kGini;
  // kBoostGain only.
  double lambda = 1.0;
  double gamma = 0.0;
  // Drives per-split feature subsampling.
  std::uint64_t seed = 0;

  void Validate() const;
};

struct TreeNode {
  // -1 marks a leaf.
  int feature = -1;
  double threshold = 0.0;
  // First bin routed right when grown on binned data, else -1.
  int split_bin = -1;
  int left = -1;
  int right = -1;
  // Reserved; inputs are complete so it is never consulted.
  bool default_left = true;
  double value = 0.0;
  // Training rows that reached the node (bootstrap duplicates counted).
  double cover = 0.0;

  bool is_leaf() const { return feature < 0; }
};

// Binary tree in preorder; node 0 is the root. A row goes left when
// row[feature] < threshold.
struct Tree {
  std::size_t width = 0;
  std::vector<TreeNode> nodes;
  // Impurity decrease (gini/variance, weighted by node sample fraction) or
  // split gain (boost) accumulated per input column.
  std::vector<double> importance;

  static Tree Leaf(std::size_t width, double value);
  static Tree Stump(std::size_t width, int feature, double threshold, double left_value,
                    double right_value);

  double Predict(std::span<const double> row) const;
  std::size_t LeafIndex(std::span<const double> row) const;
  std::size_t leaf_count() const;
  std::size_t depth() const;
  // Structural checks used after deserialization; throws SchemaViolation.
  void Validate() const;
};

// Quantile-binned copy of a feature matrix.
struct BinnedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t max_bins = 0;
  std::vector<std::uint16_t> bins;
  // Per feature: ascending cut points; value < edges[b] falls at or below bin b.
  std::vector<std::vector<double>> edges;
  // Per feature and bin: smallest and largest training value in the bin.
  std::vector<std::vector<double>> bin_lo;
  std::vector<std::vector<double>> bin_hi;

  std::uint16_t at(std::size_t i, std::size_t j) const { return bins[i * cols + j]; }
  std::size_t bin_count(std::size_t j) const { return bin_lo[j].size(); }
  std::uint16_t BinOf(std::size_t j, double value) const;
};

BinnedMatrix BinFeatures(const FeatureMatrix& m, std::size_t max_bins);

// Ordinal codes per feature consumed by the split search. Exact indexes
// code distinct values; binned reuses histogram bins. Growth on either view
// runs the same scan, so lossless binning reproduces exact trees.
class SplitIndex {
 public:
  static SplitIndex Exact(const FeatureMatrix& m);
  static SplitIndex Binned(const BinnedMatrix& b);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool binned() const { return binned_; }
  std::uint32_t code(std::size_t i, std::size_t j) const { return codes_[i * cols_ + j]; }
  std::size_t code_count(std::size_t j) const { return lo_[j].size(); }
  double lo(std::size_t j, std::uint32_t c) const { return lo_[j][c]; }
  double hi(std::size_t j, std::uint32_t c) const { return hi_[j][c]; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  bool binned_ = false;
  std::vector<std::uint32_t> codes_;
  std::vector<std::vector<double>> lo_;
  std::vector<std::vector<double>> hi_;
};

// Threshold strictly above `below` and at most `above`.
double SplitPoint(double below, double above);

// Gini or variance growth on real targets. `sample` lists training rows in
// ascending order and may repeat rows (bootstrap); empty means all rows.
Tree GrowTree(const SplitIndex& index, std::span<const double> targets, const GrowthParams& params,
              std::span<const std::size_t> sample = {});

// Boost-gain growth; leaves hold unscaled Newton weights.
Tree GrowTree(const SplitIndex& index, std::span<const GradHess> grad, const GrowthParams& params,
              std::span<const std::size_t> sample = {});

// Convenience overloads building the index on the fly.
Tree GrowTree(const FeatureMatrix& m, std::span<const double> targets, const GrowthParams& params);
Tree GrowTree(const BinnedMatrix& m, std::span<const double> targets, const GrowthParams& params);

// Traversal on bin ids: left when bin < split_bin. Only meaningful for
// trees grown on the same binning.
double PredictBinned(const Tree& tree, const BinnedMatrix& m, std::size_t row);

}  // namespace wve

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

#include "wve/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "wve/error.hpp"
#include "wve/rng.hpp"

namespace wve {
namespace {

// Node sufficient statistics: row count plus two criterion-specific sums
// (gini/variance: sum y, sum y^2; boost: sum g, sum h).
struct Stat {
  double n = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;

  void Add(const Stat& o) {
    n += o.n;
    s1 += o.s1;
    s2 += o.s2;
  }
  Stat Minus(const Stat& o) const { return {n - o.n, s1 - o.s1, s2 - o.s2}; }
};

// n * gini for a binary class fraction s/n.
double GiniMass(const Stat& s) { return s.n > 0.0 ? 2.0 * s.s1 * (s.n - s.s1) / s.n : 0.0; }

double SquaredErrorMass(const Stat& s) {
  return s.n > 0.0 ? s.s2 - s.s1 * s.s1 / s.n : 0.0;
}

struct Group {
  std::uint32_t code;
  Stat stat;
};

struct Candidate {
  int feature = -1;
  std::uint32_t left_code = 0;
  std::uint32_t right_code = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

class Grower {
 public:
  Grower(const SplitIndex& index, std::vector<Stat> stats, const GrowthParams& params)
      : index_(index), stats_(std::move(stats)), params_(params), rng_(params.seed) {
    features_.resize(index.cols());
    std::iota(features_.begin(), features_.end(), 0);
    mtry_ = params.max_features.Resolve(index.cols());
  }

  Tree Grow(std::vector<std::size_t> rows) {
    tree_.width = index_.cols();
    tree_.importance.assign(index_.cols(), 0.0);
    root_n_ = static_cast<double>(rows.size());
    tree_.nodes.emplace_back();
    Build(0, std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  void Build(int node_id, std::vector<std::size_t> rows, int depth) {
    Stat total;
    for (std::size_t r : rows) total.Add(stats_[r]);
    {
      TreeNode& node = tree_.nodes[node_id];
      node.cover = total.n;
      node.value = LeafValue(total);
    }

    if (depth >= params_.max_depth || rows.size() < params_.min_samples_split ||
        rows.size() < 2 * params_.min_samples_leaf || IsPure(rows, total)) {
      return;
    }

    const auto best = FindSplit(rows);
    if (!best) return;

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (std::size_t r : rows) {
      (index_.code(r, best->feature) <= best->left_code ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    tree_.importance[best->feature] +=
        params_.criterion == Criterion::kBoostGain ? best->gain : best->gain / root_n_;

    const int left_id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    {
      TreeNode& node = tree_.nodes[node_id];
      node.feature = best->feature;
      node.threshold = best->threshold;
      node.split_bin = index_.binned() ? static_cast<int>(best->right_code) : -1;
      node.left = left_id;
    }
    Build(left_id, std::move(left_rows), depth + 1);
    const int right_id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    tree_.nodes[node_id].right = right_id;
    Build(right_id, std::move(right_rows), depth + 1);
  }

  double LeafValue(const Stat& s) const {
    if (params_.criterion == Criterion::kBoostGain) return LeafWeight(s.s1, s.s2, params_.lambda);
    return s.n > 0.0 ? s.s1 / s.n : 0.0;
  }

  bool IsPure(const std::vector<std::size_t>& rows, const Stat& total) const {
    switch (params_.criterion) {
      case Criterion::kGini:
        return total.s1 == 0.0 || total.s1 == total.n;
      case Criterion::kVariance: {
        const double first = stats_[rows.front()].s1;
        return std::all_of(rows.begin(), rows.end(),
                           [&](std::size_t r) { return stats_[r].s1 == first; });
      }
      case Criterion::kBoostGain:
        return false;
    }
    return false;
  }

  double Gain(const Stat& left, const Stat& right, const Stat& total) const {
    switch (params_.criterion) {
      case Criterion::kGini:
        return GiniMass(total) - GiniMass(left) - GiniMass(right);
      case Criterion::kVariance:
        return SquaredErrorMass(total) - SquaredErrorMass(left) - SquaredErrorMass(right);
      case Criterion::kBoostGain:
        return SplitGain(left.s1, left.s2, right.s1, right.s2, params_.lambda, params_.gamma);
    }
    return 0.0;
  }

  bool Admissible(const Stat& left, const Stat& right) const {
    const double min_leaf = static_cast<double>(params_.min_samples_leaf);
    if (left.n < min_leaf || right.n < min_leaf) return false;
    if (params_.criterion == Criterion::kBoostGain) {
      if (left.s2 + params_.lambda <= 0.0 || right.s2 + params_.lambda <= 0.0) return false;
    }
    return true;
  }

  std::vector<std::size_t> CandidateFeatures() {
    if (mtry_ >= features_.size()) return features_;
    std::vector<std::size_t> pool = features_;
    for (std::size_t i = 0; i < mtry_; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng_.Below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(mtry_);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  // Per-code sums over the node, each summed in ascending row order. Small
  // nodes sort (code, row) pairs; large nodes accumulate into a dense array.
  // Both paths add the same terms in the same order.
  void Groups(const std::vector<std::size_t>& rows, std::size_t f, std::vector<Group>& out) {
    out.clear();
    const std::size_t codes = index_.code_count(f);
    if (rows.size() * 8 < codes) {
      pairs_.clear();
      for (std::size_t r : rows) pairs_.emplace_back(index_.code(r, f), r);
      std::sort(pairs_.begin(), pairs_.end());
      for (const auto& [code, r] : pairs_) {
        if (out.empty() || out.back().code != code) out.push_back({code, {}});
        out.back().stat.Add(stats_[r]);
      }
      return;
    }
    dense_.assign(codes, Stat{});
    for (std::size_t r : rows) dense_[index_.code(r, f)].Add(stats_[r]);
    for (std::uint32_t c = 0; c < codes; ++c) {
      if (dense_[c].n > 0.0) out.push_back({c, dense_[c]});
    }
  }

  std::optional<Candidate> FindSplit(const std::vector<std::size_t>& rows) {
    std::optional<Candidate> best;
    for (std::size_t f : CandidateFeatures()) {
      Groups(rows, f, groups_);
      if (groups_.size() < 2) continue;
      Stat total;
      for (const auto& g : groups_) total.Add(g.stat);
      Stat left;
      for (std::size_t k = 0; k + 1 < groups_.size(); ++k) {
        left.Add(groups_[k].stat);
        const Stat right = total.Minus(left);
        if (!Admissible(left, right)) continue;
        const double gain = Gain(left, right, total);
        if (!best || gain > best->gain) {
          const std::uint32_t lc = groups_[k].code;
          const std::uint32_t rc = groups_[k + 1].code;
          best = Candidate{static_cast<int>(f), lc, rc, SplitPoint(index_.hi(f, lc), index_.lo(f, rc)),
                           gain};
        }
      }
    }
    if (best && params_.criterion == Criterion::kBoostGain && !(best->gain > 0.0)) return std::nullopt;
    return best;
  }

  const SplitIndex& index_;
  std::vector<Stat> stats_;
  const GrowthParams& params_;
  Rng rng_;
  Tree tree_;
  double root_n_ = 0.0;
  std::vector<std::size_t> features_;
  std::size_t mtry_ = 0;
  std::vector<Group> groups_;
  std::vector<Stat> dense_;
  std::vector<std::pair<std::uint32_t, std::size_t>> pairs_;
};

std::vector<std::size_t> ResolveSample(const SplitIndex& index, std::span<const std::size_t> sample) {
  if (sample.empty()) {
    std::vector<std::size_t> rows(index.rows());
    std::iota(rows.begin(), rows.end(), 0);
    return rows;
  }
  std::vector<std::size_t> rows(sample.begin(), sample.end());
  Require(std::is_sorted(rows.begin(), rows.end()), ErrorKind::kInvalidArgument,
          "sample rows must be sorted");
  Require(rows.back() < index.rows(), ErrorKind::kInvalidArgument, "sample row out of range");
  return rows;
}

std::vector<double> SortedDistinct(const FeatureMatrix& m, std::size_t j) {
  std::vector<double> values(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) values[i] = m.at(i, j);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace

std::size_t MaxFeatures::Resolve(std::size_t width) const {
  switch (mode) {
    case Mode::kAll:
      return width;
    case Mode::kSqrt:
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(width))));
    case Mode::kCount:
      return std::clamp<std::size_t>(count, 1, std::max<std::size_t>(width, 1));
  }
  return width;
}

void GrowthParams::Validate() const {
  Require(max_depth >= 0, ErrorKind::kInvalidArgument, "max depth must be >= 0");
  Require(min_samples_split >= 2, ErrorKind::kInvalidArgument, "min samples split must be >= 2");
  Require(min_samples_leaf >= 1, ErrorKind::kInvalidArgument, "min samples leaf must be >= 1");
  Require(max_features.mode != MaxFeatures::Mode::kCount || max_features.count >= 1,
          ErrorKind::kInvalidArgument, "max features count must be >= 1");
  Require(lambda >= 0.0 && gamma >= 0.0, ErrorKind::kInvalidArgument,
          "lambda and gamma must be >= 0");
}

double SplitPoint(double below, double above) {
  const double mid = below + (above - below) * 0.5;
  return mid > below ? mid : above;
}

Tree Tree::Leaf(std::size_t width, double value) {
  Tree t;
  t.width = width;
  t.importance.assign(width, 0.0);
  TreeNode leaf;
  leaf.value = value;
  t.nodes.push_back(leaf);
  return t;
}

Tree Tree::Stump(std::size_t width, int feature, double threshold, double left_value,
                 double right_value) {
  Require(feature >= 0 && static_cast<std::size_t>(feature) < width, ErrorKind::kInvalidArgument,
          "stump feature out of range");
  Tree t;
  t.width = width;
  t.importance.assign(width, 0.0);
  TreeNode root;
  root.feature = feature;
  root.threshold = threshold;
  root.left = 1;
  root.right = 2;
  TreeNode left;
  left.value = left_value;
  TreeNode right;
  right.value = right_value;
  t.nodes = {root, left, right};
  return t;
}

std::size_t Tree::LeafIndex(std::span<const double> row) const {
  if (row.size() != width) {
    throw Error(ErrorKind::kWidthMismatch, "row has " + std::to_string(row.size()) +
                                               " columns, tree expects " + std::to_string(width));
  }
  std::size_t id = 0;
  while (!nodes[id].is_leaf()) {
    const TreeNode& n = nodes[id];
    id = static_cast<std::size_t>(row[n.feature] < n.threshold ? n.left : n.right);
  }
  return id;
}

double Tree::Predict(std::span<const double> row) const { return nodes[LeafIndex(row)].value; }

std::size_t Tree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

std::size_t Tree::depth() const {
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes[i].is_leaf()) {
      level[nodes[i].left] = level[i] + 1;
      level[nodes[i].right] = level[i] + 1;
    }
  }
  return deepest;
}

void Tree::Validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kSchemaViolation, "tree: " + what); };
  if (nodes.empty()) fail("no nodes");
  std::vector<int> parents(nodes.size(), 0);
  std::size_t internal = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const TreeNode& n = nodes[i];
    if (n.is_leaf()) {
      if (n.left != -1 || n.right != -1) fail("leaf with children");
      if (!std::isfinite(n.value)) fail("non-finite leaf value");
      continue;
    }
    ++internal;
    if (static_cast<std::size_t>(n.feature) >= width) fail("split feature out of range");
    if (std::isnan(n.threshold)) fail("NaN threshold");
    for (int child : {n.left, n.right}) {
      // Preorder layout: children follow their parent.
      if (child <= static_cast<int>(i) || child >= static_cast<int>(nodes.size())) {
        fail("child index out of order");
      }
      ++parents[child];
    }
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (parents[i] != 1) fail("node without a unique parent");
  }
  if (leaf_count() != internal + 1) fail("leaf count != internal count + 1");
  if (!importance.empty() && importance.size() != width) fail("importance width mismatch");
}

std::uint16_t BinnedMatrix::BinOf(std::size_t j, double value) const {
  const auto& e = edges[j];
  return static_cast<std::uint16_t>(std::upper_bound(e.begin(), e.end(), value) - e.begin());
}

BinnedMatrix BinFeatures(const FeatureMatrix& m, std::size_t max_bins) {
  Require(max_bins >= 2 && max_bins <= 65535, ErrorKind::kInvalidArgument,
          "max bins must lie in [2, 65535]");
  Require(m.rows > 0, ErrorKind::kInvalidArgument, "cannot bin an empty matrix");
  BinnedMatrix b;
  b.rows = m.rows;
  b.cols = m.cols;
  b.max_bins = max_bins;
  b.bins.resize(m.rows * m.cols);
  b.edges.resize(m.cols);
  b.bin_lo.resize(m.cols);
  b.bin_hi.resize(m.cols);

  std::vector<double> sorted(m.rows);
  for (std::size_t j = 0; j < m.cols; ++j) {
    for (std::size_t i = 0; i < m.rows; ++i) sorted[i] = m.at(i, j);
    std::sort(sorted.begin(), sorted.end());

    // Distinct values with multiplicities.
    std::vector<std::pair<double, std::size_t>> distinct;
    for (double v : sorted) {
      if (distinct.empty() || distinct.back().first != v) distinct.emplace_back(v, 0);
      ++distinct.back().second;
    }

    auto& lo = b.bin_lo[j];
    auto& hi = b.bin_hi[j];
    if (distinct.size() <= max_bins) {
      for (const auto& [v, count] : distinct) {
        lo.push_back(v);
        hi.push_back(v);
      }
    } else {
      // Close a bin once its cumulative count reaches the next quantile.
      const double n = static_cast<double>(m.rows);
      double cumulative = 0.0;
      bool open = false;
      for (std::size_t k = 0; k < distinct.size(); ++k) {
        const auto& [v, count] = distinct[k];
        if (!open) {
          lo.push_back(v);
          open = true;
        }
        cumulative += static_cast<double>(count);
        const double target = n * static_cast<double>(lo.size()) / static_cast<double>(max_bins);
        if (cumulative >= target || k + 1 == distinct.size()) {
          hi.push_back(v);
          open = false;
        }
      }
    }
    for (std::size_t k = 0; k + 1 < lo.size(); ++k) b.edges[j].push_back(SplitPoint(hi[k], lo[k + 1]));
    for (std::size_t i = 0; i < m.rows; ++i) b.bins[i * m.cols + j] = b.BinOf(j, m.at(i, j));
  }
  return b;
}

SplitIndex SplitIndex::Exact(const FeatureMatrix& m) {
  SplitIndex index;
  index.rows_ = m.rows;
  index.cols_ = m.cols;
  index.binned_ = false;
  index.codes_.resize(m.rows * m.cols);
  index.lo_.resize(m.cols);
  index.hi_.resize(m.cols);
  for (std::size_t j = 0; j < m.cols; ++j) {
    auto distinct = SortedDistinct(m, j);
    for (std::size_t i = 0; i < m.rows; ++i) {
      const auto it = std::lower_bound(distinct.begin(), distinct.end(), m.at(i, j));
      index.codes_[i * m.cols + j] = static_cast<std::uint32_t>(it - distinct.begin());
    }
    index.lo_[j] = distinct;
    index.hi_[j] = std::move(distinct);
  }
  return index;
}

SplitIndex SplitIndex::Binned(const BinnedMatrix& b) {
  SplitIndex index;
  index.rows_ = b.rows;
  index.cols_ = b.cols;
  index.binned_ = true;
  index.codes_.assign(b.bins.begin(), b.bins.end());
  index.lo_ = b.bin_lo;
  index.hi_ = b.bin_hi;
  return index;
}

Tree GrowTree(const SplitIndex& index, std::span<const double> targets, const GrowthParams& params,
              std::span<const std::size_t> sample) {
  params.Validate();
  Require(params.criterion != Criterion::kBoostGain, ErrorKind::kInvalidArgument,
          "boost-gain growth needs gradient statistics");
  Require(targets.size() == index.rows(), ErrorKind::kLengthMismatch,
          "target count does not match rows");
  Require(index.rows() > 0, ErrorKind::kInvalidArgument, "cannot grow a tree on zero rows");
  std::vector<Stat> stats(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    stats[i] = {1.0, targets[i], targets[i] * targets[i]};
  }
  Grower grower(index, std::move(stats), params);
  return grower.Grow(ResolveSample(index, sample));
}

Tree GrowTree(const SplitIndex& index, std::span<const GradHess> grad, const GrowthParams& params,
              std::span<const std::size_t> sample) {
  params.Validate();
  Require(params.criterion == Criterion::kBoostGain, ErrorKind::kInvalidArgument,
          "gradient statistics need the boost-gain criterion");
  Require(grad.size() == index.rows(), ErrorKind::kLengthMismatch,
          "gradient count does not match rows");
  Require(index.rows() > 0, ErrorKind::kInvalidArgument, "cannot grow a tree on zero rows");
  std::vector<Stat> stats(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) stats[i] = {1.0, grad[i].g, grad[i].h};
  Grower grower(index, std::move(stats), params);
  return grower.Grow(ResolveSample(index, sample));
}

Tree GrowTree(const FeatureMatrix& m, std::span<const double> targets, const GrowthParams& params) {
  return GrowTree(SplitIndex::Exact(m), targets, params);
}

Tree GrowTree(const BinnedMatrix& m, std::span<const double> targets, const GrowthParams& params) {
  return GrowTree(SplitIndex::Binned(m), targets, params);
}

double PredictBinned(const Tree& tree, const BinnedMatrix& m, std::size_t row) {
  Require(m.cols == tree.width, ErrorKind::kWidthMismatch, "binned matrix width mismatch");
  std::size_t id = 0;
  while (!tree.nodes[id].is_leaf()) {
    const TreeNode& n = tree.nodes[id];
    id = static_cast<std::size_t>(static_cast<int>(m.at(row, n.feature)) < n.split_bin ? n.left
                                                                                        : n.right);
  }
  return tree.nodes[id].value;
}

}  // namespace wve

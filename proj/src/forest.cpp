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

#include "wve/forest.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <utility>

#include "wve/error.hpp"
#include "wve/rng.hpp"

namespace wve {
namespace {

Forest Fit(const FeatureMatrix& m, std::span<const double> targets, const ForestParams& params,
           ForestTask task) {
  params.Validate();
  Require(m.rows > 0, ErrorKind::kInvalidArgument, "cannot fit a forest on zero rows");
  Require(targets.size() == m.rows, ErrorKind::kLengthMismatch, "target count does not match rows");

  const SplitIndex index = SplitIndex::Exact(m);
  GrowthParams growth;
  growth.criterion = task == ForestTask::kClassification ? Criterion::kGini : Criterion::kVariance;
  growth.max_depth = params.max_depth;
  growth.min_samples_split = params.min_samples_split;
  growth.min_samples_leaf = params.min_samples_leaf;
  growth.max_features = params.max_features;

  std::vector<Tree> trees(params.n_trees);
  auto grow = [&](std::size_t t) {
    const std::uint64_t tree_seed = DeriveSeed(params.seed, t);
    std::vector<std::size_t> sample;
    if (params.bootstrap) {
      Rng rng(tree_seed);
      sample.resize(m.rows);
      for (auto& r : sample) r = static_cast<std::size_t>(rng.Below(m.rows));
      std::sort(sample.begin(), sample.end());
    }
    GrowthParams p = growth;
    p.seed = DeriveSeed(tree_seed, 1);
    trees[t] = GrowTree(index, targets, p, sample);
  };

  const std::size_t threads = std::clamp<std::size_t>(params.threads, 1, params.n_trees);
  if (threads == 1) {
    for (std::size_t t = 0; t < params.n_trees; ++t) grow(t);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> workers;
      for (std::size_t w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
          try {
            for (std::size_t t = w; t < params.n_trees; t += threads) grow(t);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<std::size_t> origins;
  origins.reserve(m.cols);
  for (const auto& c : m.columns) origins.push_back(c.origin);
  return Forest(task, m.cols, std::move(trees), std::move(origins), m.origin_names);
}

}  // namespace

void ForestParams::Validate() const {
  Require(n_trees >= 1, ErrorKind::kInvalidArgument, "forest needs at least one tree");
  Require(max_depth >= 0, ErrorKind::kInvalidArgument, "max depth must be >= 0");
}

Forest::Forest(ForestTask task, std::size_t width, std::vector<Tree> trees,
               std::vector<std::size_t> column_origins, std::vector<std::string> origin_names)
    : task_(task),
      width_(width),
      trees_(std::move(trees)),
      column_origins_(std::move(column_origins)),
      origin_names_(std::move(origin_names)) {
  Require(!trees_.empty(), ErrorKind::kInvalidArgument, "forest needs at least one tree");
  Require(column_origins_.size() == width_, ErrorKind::kWidthMismatch,
          "column origin count differs from width");
  for (const auto& t : trees_) {
    Require(t.width == width_, ErrorKind::kWidthMismatch, "tree width differs from forest width");
  }
  for (std::size_t o : column_origins_) {
    Require(o < origin_names_.size(), ErrorKind::kInvalidArgument, "column origin out of range");
  }
}

double Forest::PredictRegression(std::span<const double> row) const {
  if (task_ != ForestTask::kRegression) {
    throw Error(ErrorKind::kTaskMismatch, "forest was trained for classification");
  }
  CheckWidth(row);
  double sum = 0.0;
  for (const auto& t : trees_) sum += t.Predict(row);
  return sum / static_cast<double>(trees_.size());
}

ClassVote Forest::PredictClass(std::span<const double> row) const {
  if (task_ != ForestTask::kClassification) {
    throw Error(ErrorKind::kTaskMismatch, "forest was trained for regression");
  }
  CheckWidth(row);
  std::size_t positive = 0;
  for (const auto& t : trees_) {
    // A leaf votes for its majority class; an even leaf votes 0.
    if (t.Predict(row) > 0.5) ++positive;
  }
  const double n = static_cast<double>(trees_.size());
  ClassVote vote;
  vote.proba[1] = static_cast<double>(positive) / n;
  vote.proba[0] = static_cast<double>(trees_.size() - positive) / n;
  vote.label = 2 * positive > trees_.size() ? 1 : 0;
  return vote;
}

ClassProba Forest::PredictProba(std::span<const double> row) const { return PredictClass(row).proba; }

std::vector<double> Forest::FeatureImportance() const {
  std::vector<double> per_column(width_, 0.0);
  for (const auto& t : trees_) {
    for (std::size_t j = 0; j < t.importance.size(); ++j) per_column[j] += t.importance[j];
  }
  std::vector<double> per_origin(origin_names_.size(), 0.0);
  for (std::size_t j = 0; j < width_; ++j) {
    per_origin[column_origins_[j]] += per_column[j] / static_cast<double>(trees_.size());
  }
  double total = 0.0;
  for (double v : per_origin) total += v;
  if (total > 0.0) {
    for (double& v : per_origin) v /= total;
  }
  return per_origin;
}

Forest FitForest(const FeatureMatrix& m, const ForestParams& params) {
  Require(m.labels.size() == m.rows, ErrorKind::kInvalidArgument, "matrix has no labels");
  std::vector<double> targets(m.labels.begin(), m.labels.end());
  return Fit(m, targets, params, ForestTask::kClassification);
}

Forest FitForestRegression(const FeatureMatrix& m, std::span<const double> targets,
                           const ForestParams& params) {
  return Fit(m, targets, params, ForestTask::kRegression);
}

}  // namespace wve

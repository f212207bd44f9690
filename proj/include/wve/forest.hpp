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
#include <span>
#include <string>
#include <vector>

#include "wve/classifier.hpp"
#include "wve/tabular.hpp"
#include "wve/tree.hpp"

namespace wve {

enum class ForestTask { kClassification, kRegression };

struct ForestParams {
  std::size_t n_trees = 100;
  bool bootstrap = true;
  MaxFeatures max_features = MaxFeatures::Sqrt();
  int max_depth = kUnlimitedDepth;
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  std::uint64_t seed = 0;
  // Trees are seeded by (seed, index), so results do not depend on this.
  std::size_t threads = 1;

  void Validate() const;
};

struct ClassVote {
  int label = 0;
  ClassProba proba{};
};

class Forest final : public Classifier {
 public:
  using Classifier::Predict;
  using Classifier::PredictProba;

  Forest(ForestTask task, std::size_t width, std::vector<Tree> trees,
         std::vector<std::size_t> column_origins, std::vector<std::string> origin_names);

  ModelKind kind() const override { return ModelKind::kForest; }
  std::size_t width() const override { return width_; }
  // Vote fractions; classification only.
  ClassProba PredictProba(std::span<const double> row) const override;

  // Mean of tree outputs.
  double PredictRegression(std::span<const double> row) const;
  // Majority vote, ties to class 0; proba holds the vote fractions.
  ClassVote PredictClass(std::span<const double> row) const;

  // Mean per-tree impurity decrease, summed back onto original features and
  // normalized to sum to one (all zeros when no tree split).
  std::vector<double> FeatureImportance() const;

  ForestTask task() const { return task_; }
  const std::vector<Tree>& trees() const { return trees_; }
  const std::vector<std::size_t>& column_origins() const { return column_origins_; }
  const std::vector<std::string>& origin_names() const { return origin_names_; }

 private:
  ForestTask task_;
  std::size_t width_;
  std::vector<Tree> trees_;
  std::vector<std::size_t> column_origins_;
  std::vector<std::string> origin_names_;
};

// Gini trees on the matrix labels.
Forest FitForest(const FeatureMatrix& m, const ForestParams& params);
// Variance trees on real-valued targets.
Forest FitForestRegression(const FeatureMatrix& m, std::span<const double> targets,
                           const ForestParams& params);

}  // namespace wve

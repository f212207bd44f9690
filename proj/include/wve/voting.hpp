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
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "wve/boosting.hpp"
#include "wve/classifier.hpp"
#include "wve/forest.hpp"
#include "wve/tabular.hpp"

namespace wve {

// Binary decision rule: positive when the weighted member score reaches
// the threshold (equality counts as positive).
struct ThresholdRule {
  double threshold = 0.5;

  void Validate() const;
};

// What each member contributes to the thresholded sum: its positive-class
// probability, or its hard 0/1 vote.
enum class VoteInput { kProbability, kHardVote };

class WeightedEnsemble final : public Classifier {
 public:
  using Classifier::Predict;
  using Classifier::PredictProba;

  // Weights must be nonnegative and sum to one; members share one width.
  WeightedEnsemble(std::vector<std::shared_ptr<const Classifier>> members,
                   std::vector<double> weights);

  ModelKind kind() const override { return ModelKind::kWeightedEnsemble; }
  std::size_t width() const override { return width_; }
  ClassProba PredictProba(std::span<const double> row) const override { return SoftVote(row); }

  // Per-class sum of weight * member probability, accumulated in member
  // order.
  ClassProba SoftVote(std::span<const double> row) const;
  int PredictArgmax(std::span<const double> row) const { return ArgmaxClass(SoftVote(row)); }
  int PredictThreshold(std::span<const double> row, const ThresholdRule& rule,
                       VoteInput input = VoteInput::kProbability) const;
  double WeightedPositiveScore(std::span<const double> row,
                               VoteInput input = VoteInput::kProbability) const;

  const std::vector<std::shared_ptr<const Classifier>>& members() const { return members_; }
  const std::vector<double>& weights() const { return weights_; }

 private:
  ClassProba MemberProba(std::size_t j, std::span<const double> row) const;

  std::vector<std::shared_ptr<const Classifier>> members_;
  std::vector<double> weights_;
  std::size_t width_ = 0;
};

// score_i / sum(scores). Throws AllZeroScores when no score is positive.
std::vector<double> DeriveWeights(std::span<const double> scores);

enum class CvScoring { kAccuracy, kF1 };

struct CvSpec {
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  CvScoring scoring = CvScoring::kAccuracy;

  void Validate() const;
};

using FitProcedure = std::function<std::shared_ptr<const Classifier>(const FeatureMatrix&)>;

// Fold id per row; each class is shuffled and dealt round-robin. Throws
// DegenerateFold unless every fold holds both classes.
std::vector<std::size_t> StratifiedFolds(std::span<const int> labels, std::size_t folds,
                                         std::uint64_t seed);

// Mean validation score of each procedure over the folds.
std::vector<double> CrossValidatedScores(std::span<const FitProcedure> procedures,
                                         const FeatureMatrix& m, const CvSpec& spec);
std::vector<double> CrossValidatedWeights(std::span<const FitProcedure> procedures,
                                          const FeatureMatrix& m, const CvSpec& spec);

struct WveParams {
  ForestParams forest;
  // Shared by both boosted members; mode is overridden per member.
  BoostParams boost;
  CvSpec cv;
};

// Member procedures in ensemble order: forest, exact boosting, histogram
// boosting.
std::vector<FitProcedure> WveMemberProcedures(const WveParams& params);

struct WveFit {
  std::shared_ptr<const WeightedEnsemble> ensemble;
  std::vector<double> cv_scores;
};

WveFit FitWveDetailed(const FeatureMatrix& m, const WveParams& params);
WeightedEnsemble FitWve(const FeatureMatrix& m, const WveParams& params);

}  // namespace wve

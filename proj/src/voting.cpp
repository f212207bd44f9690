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

#include "wve/voting.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "wve/error.hpp"
#include "wve/metrics.hpp"
#include "wve/rng.hpp"

namespace wve {

void ThresholdRule::Validate() const {
  Require(threshold >= 0.0 && threshold <= 1.0, ErrorKind::kInvalidArgument,
          "threshold must lie in [0, 1]");
}

WeightedEnsemble::WeightedEnsemble(std::vector<std::shared_ptr<const Classifier>> members,
                                   std::vector<double> weights)
    : members_(std::move(members)), weights_(std::move(weights)) {
  Require(!members_.empty(), ErrorKind::kInvalidArgument, "ensemble needs at least one member");
  Require(members_.size() == weights_.size(), ErrorKind::kLengthMismatch,
          "member and weight counts differ");
  double total = 0.0;
  for (double w : weights_) {
    Require(std::isfinite(w) && w >= 0.0, ErrorKind::kInvalidArgument,
            "weights must be finite and nonnegative");
    total += w;
  }
  Require(std::abs(total - 1.0) <= 1e-9, ErrorKind::kInvalidArgument, "weights must sum to 1");
  for (const auto& m : members_) Require(m != nullptr, ErrorKind::kInvalidArgument, "null member");
  width_ = members_.front()->width();
  for (const auto& m : members_) {
    Require(m->width() == width_, ErrorKind::kWidthMismatch, "members disagree on input width");
  }
}

ClassProba WeightedEnsemble::MemberProba(std::size_t j, std::span<const double> row) const {
  ClassProba p;
  try {
    p = members_[j]->PredictProba(row);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::kMemberFailure,
                "member " + std::to_string(j) + " failed: " + e.what(), j);
  }
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorKind::kMemberFailure,
                  "member " + std::to_string(j) + " returned a probability outside [0, 1]", j);
    }
  }
  return p;
}

ClassProba WeightedEnsemble::SoftVote(std::span<const double> row) const {
  CheckWidth(row);
  ClassProba out{0.0, 0.0};
  for (std::size_t j = 0; j < members_.size(); ++j) {
    const ClassProba p = MemberProba(j, row);
    out[0] += weights_[j] * p[0];
    out[1] += weights_[j] * p[1];
  }
  return out;
}

double WeightedEnsemble::WeightedPositiveScore(std::span<const double> row, VoteInput input) const {
  CheckWidth(row);
  double score = 0.0;
  for (std::size_t j = 0; j < members_.size(); ++j) {
    const ClassProba p = MemberProba(j, row);
    const double contribution = input == VoteInput::kProbability ? p[1] : ArgmaxClass(p);
    score += weights_[j] * contribution;
  }
  return score;
}

int WeightedEnsemble::PredictThreshold(std::span<const double> row, const ThresholdRule& rule,
                                       VoteInput input) const {
  rule.Validate();
  return WeightedPositiveScore(row, input) >= rule.threshold ? 1 : 0;
}

std::vector<double> DeriveWeights(std::span<const double> scores) {
  Require(!scores.empty(), ErrorKind::kInvalidArgument, "no member scores");
  double total = 0.0;
  for (double s : scores) {
    Require(std::isfinite(s) && s >= 0.0, ErrorKind::kInvalidArgument,
            "member scores must be finite and nonnegative");
    total += s;
  }
  if (!(total > 0.0)) throw Error(ErrorKind::kAllZeroScores, "every member score is zero");
  std::vector<double> weights;
  weights.reserve(scores.size());
  for (double s : scores) weights.push_back(s / total);
  return weights;
}

void CvSpec::Validate() const {
  Require(folds >= 2, ErrorKind::kInvalidArgument, "cross-validation needs at least 2 folds");
}

std::vector<std::size_t> StratifiedFolds(std::span<const int> labels, std::size_t folds,
                                         std::uint64_t seed) {
  Require(folds >= 2, ErrorKind::kInvalidArgument, "cross-validation needs at least 2 folds");
  std::vector<std::size_t> fold_of(labels.size(), 0);
  Rng rng(seed);
  for (int c = 0; c < 2; ++c) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) idx.push_back(i);
    }
    if (idx.size() < folds) {
      throw Error(ErrorKind::kDegenerateFold,
                  "class " + std::to_string(c) + " has " + std::to_string(idx.size()) +
                      " rows, fewer than " + std::to_string(folds) + " folds");
    }
    rng.Shuffle(std::span<std::size_t>(idx));
    for (std::size_t k = 0; k < idx.size(); ++k) fold_of[idx[k]] = k % folds;
  }
  return fold_of;
}

std::vector<double> CrossValidatedScores(std::span<const FitProcedure> procedures,
                                         const FeatureMatrix& m, const CvSpec& spec) {
  spec.Validate();
  Require(!procedures.empty(), ErrorKind::kInvalidArgument, "no member procedures");
  Require(m.labels.size() == m.rows, ErrorKind::kInvalidArgument, "matrix has no labels");
  const auto fold_of = StratifiedFolds(m.labels, spec.folds, spec.seed);

  std::vector<double> scores(procedures.size(), 0.0);
  for (std::size_t f = 0; f < spec.folds; ++f) {
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> valid_idx;
    for (std::size_t i = 0; i < m.rows; ++i) (fold_of[i] == f ? valid_idx : train_idx).push_back(i);
    const FeatureMatrix train = m.Subset(train_idx);
    const FeatureMatrix valid = m.Subset(valid_idx);
    for (std::size_t j = 0; j < procedures.size(); ++j) {
      const auto model = procedures[j](train);
      const auto predicted = model->Predict(valid);
      const auto report = ClassificationReport(ComputeConfusion(valid.labels, predicted),
                                               Averaging::kPositiveClass);
      scores[j] += spec.scoring == CvScoring::kAccuracy ? report.accuracy : report.f1;
    }
  }
  for (double& s : scores) s /= static_cast<double>(spec.folds);
  return scores;
}

std::vector<double> CrossValidatedWeights(std::span<const FitProcedure> procedures,
                                          const FeatureMatrix& m, const CvSpec& spec) {
  return DeriveWeights(CrossValidatedScores(procedures, m, spec));
}

std::vector<FitProcedure> WveMemberProcedures(const WveParams& params) {
  const ForestParams forest = params.forest;
  BoostParams exact = params.boost;
  exact.mode = BoostMode::kExact;
  exact.loss = Loss::kLogLoss;
  BoostParams histogram = exact;
  histogram.mode = BoostMode::kHistogram;
  return {
      [forest](const FeatureMatrix& m) -> std::shared_ptr<const Classifier> {
        return std::make_shared<Forest>(FitForest(m, forest));
      },
      [exact](const FeatureMatrix& m) -> std::shared_ptr<const Classifier> {
        return std::make_shared<BoostedModel>(FitBoosted(m, exact));
      },
      [histogram](const FeatureMatrix& m) -> std::shared_ptr<const Classifier> {
        return std::make_shared<BoostedModel>(FitBoosted(m, histogram));
      },
  };
}

WveFit FitWveDetailed(const FeatureMatrix& m, const WveParams& params) {
  const auto procedures = WveMemberProcedures(params);
  WveFit fit;
  fit.cv_scores = CrossValidatedScores(procedures, m, params.cv);
  auto weights = DeriveWeights(fit.cv_scores);
  std::vector<std::shared_ptr<const Classifier>> members;
  for (const auto& fit_member : procedures) members.push_back(fit_member(m));
  fit.ensemble = std::make_shared<WeightedEnsemble>(std::move(members), std::move(weights));
  return fit;
}

WeightedEnsemble FitWve(const FeatureMatrix& m, const WveParams& params) {
  return *FitWveDetailed(m, params).ensemble;
}

}  // namespace wve

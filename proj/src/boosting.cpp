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

#include "wve/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "wve/error.hpp"

namespace wve {

double LeafWeight(double sum_g, double sum_h, double lambda) {
  const double denom = sum_h + lambda;
  if (denom == 0.0) throw Error(ErrorKind::kSingularLeaf, "H + lambda is zero");
  return -sum_g / denom;
}

double SplitGain(double g_left, double h_left, double g_right, double h_right, double lambda,
                 double gamma) {
  const double g = g_left + g_right;
  const double h = h_left + h_right;
  return 0.5 * (g_left * g_left / (h_left + lambda) + g_right * g_right / (h_right + lambda) -
                g * g / (h + lambda)) -
         gamma;
}

double Logistic(double raw) {
  if (raw >= 0.0) return 1.0 / (1.0 + std::exp(-raw));
  const double e = std::exp(raw);
  return e / (1.0 + e);
}

double LossValue(Loss loss, double truth, double prediction) {
  if (loss == Loss::kSquaredError) {
    const double d = truth - prediction;
    return d * d;
  }
  if (truth != 0.0 && truth != 1.0) {
    throw Error(ErrorKind::kDomainError, "log loss needs a label in {0, 1}, got " + std::to_string(truth));
  }
  const double p = std::clamp(prediction, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
  return -truth * std::log(p) - (1.0 - truth) * std::log(1.0 - p);
}

GradHess ComputeGradHess(Loss loss, double truth, double raw) {
  if (loss == Loss::kSquaredError) return {raw - truth, 1.0};
  const double p = Logistic(raw);
  return {p - truth, p * (1.0 - p)};
}

void BoostParams::Validate() const {
  Require(learning_rate > 0.0 && learning_rate <= 1.0, ErrorKind::kInvalidArgument,
          "learning rate must lie in (0, 1]");
  Require(gamma >= 0.0, ErrorKind::kInvalidArgument, "gamma must be >= 0");
  Require(lambda >= 0.0, ErrorKind::kInvalidArgument, "lambda must be >= 0");
  Require(max_depth >= 0, ErrorKind::kInvalidArgument, "max depth must be >= 0");
  Require(mode == BoostMode::kExact || (max_bins >= 2 && max_bins <= 65535),
          ErrorKind::kInvalidArgument, "max bins must lie in [2, 65535]");
}

BoostedModel::BoostedModel(std::size_t width, double base_score, std::vector<Tree> trees,
                           BoostParams params)
    : width_(width), base_score_(base_score), trees_(std::move(trees)), params_(params) {
  for (const auto& t : trees_) {
    Require(t.width == width_, ErrorKind::kWidthMismatch, "tree width differs from model width");
  }
}

double BoostedModel::PredictRaw(std::span<const double> row) const {
  CheckWidth(row);
  double raw = base_score_;
  for (const auto& t : trees_) raw += t.Predict(row);
  return raw;
}

BoostPrediction BoostedModel::PredictBoosted(std::span<const double> row) const {
  BoostPrediction out;
  out.raw = PredictRaw(row);
  if (params_.loss == Loss::kLogLoss) out.proba = Logistic(out.raw);
  return out;
}

ClassProba BoostedModel::PredictProba(std::span<const double> row) const {
  if (params_.loss != Loss::kLogLoss) {
    throw Error(ErrorKind::kTaskMismatch, "squared-error model has no class probabilities");
  }
  const double p = Logistic(PredictRaw(row));
  return {1.0 - p, p};
}

double BoostedModel::RegularizationValue() const {
  double total = 0.0;
  for (const auto& t : trees_) {
    double squares = 0.0;
    for (const auto& n : t.nodes) {
      if (!n.is_leaf()) continue;
      squares += n.value * n.value;
    }
    total += params_.gamma * static_cast<double>(t.leaf_count()) + 0.5 * params_.lambda * squares;
  }
  return total;
}

double BoostedModel::Objective(const FeatureMatrix& m, std::span<const double> targets) const {
  Require(targets.size() == m.rows, ErrorKind::kLengthMismatch, "target count does not match rows");
  double loss = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) {
    const double raw = PredictRaw(m.row(i));
    const double prediction = params_.loss == Loss::kLogLoss ? Logistic(raw) : raw;
    loss += LossValue(params_.loss, targets[i], prediction);
  }
  return loss + RegularizationValue();
}

BoostedModel BoostedModel::Truncated(std::size_t k) const {
  k = std::min(k, trees_.size());
  return BoostedModel(width_, base_score_, std::vector<Tree>(trees_.begin(), trees_.begin() + k),
                      params_);
}

BoostedModel FitBoosted(const FeatureMatrix& m, const BoostParams& params) {
  Require(m.labels.size() == m.rows, ErrorKind::kInvalidArgument, "matrix has no labels");
  std::vector<double> targets(m.labels.begin(), m.labels.end());
  return FitBoosted(m, targets, params);
}

BoostedModel FitBoosted(const FeatureMatrix& m, std::span<const double> targets,
                        const BoostParams& params) {
  params.Validate();
  Require(m.rows > 0, ErrorKind::kInvalidArgument, "cannot boost on zero rows");
  Require(targets.size() == m.rows, ErrorKind::kLengthMismatch, "target count does not match rows");

  double mean = 0.0;
  for (double u : targets) {
    if (params.loss == Loss::kLogLoss && u != 0.0 && u != 1.0) {
      throw Error(ErrorKind::kDomainError, "log loss needs labels in {0, 1}");
    }
    mean += u;
  }
  mean /= static_cast<double>(m.rows);
  double base = mean;
  if (params.loss == Loss::kLogLoss) {
    const double p = std::clamp(mean, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
    base = std::log(p / (1.0 - p));
  }

  const SplitIndex index = params.mode == BoostMode::kExact
                               ? SplitIndex::Exact(m)
                               : SplitIndex::Binned(BinFeatures(m, params.max_bins));

  GrowthParams growth;
  growth.criterion = Criterion::kBoostGain;
  growth.max_depth = params.max_depth;
  growth.lambda = params.lambda;
  growth.gamma = params.gamma;
  growth.seed = params.seed;

  std::vector<double> raw(m.rows, base);
  std::vector<GradHess> grad(m.rows);
  std::vector<Tree> trees;
  trees.reserve(params.rounds);
  for (std::size_t k = 0; k < params.rounds; ++k) {
    for (std::size_t i = 0; i < m.rows; ++i) grad[i] = ComputeGradHess(params.loss, targets[i], raw[i]);
    Tree tree = GrowTree(index, std::span<const GradHess>(grad), growth);
    for (auto& node : tree.nodes) node.value *= params.learning_rate;
    for (std::size_t i = 0; i < m.rows; ++i) raw[i] += tree.Predict(m.row(i));
    trees.push_back(std::move(tree));
  }
  return BoostedModel(m.cols, base, std::move(trees), params);
}

}  // namespace wve

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
#include <optional>
#include <span>
#include <vector>

#include "wve/classifier.hpp"
#include "wve/objective.hpp"
#include "wve/tabular.hpp"
#include "wve/tree.hpp"

namespace wve {

enum class Loss { kSquaredError, kLogLoss };
// Exact enumerates every distinct value; histogram scans quantile bins.
enum class BoostMode { kExact, kHistogram };

inline constexpr double kProbabilityEpsilon = 1e-15;

double Logistic(double raw);

// Squared error (u - p)^2, or binary log loss with p clipped to
// [eps, 1 - eps]. Log loss rejects u outside {0, 1}.
double LossValue(Loss loss, double truth, double prediction);

// Derivatives with respect to the raw score. Squared error uses the
// half-MSE convention (g = s - u, h = 1); log loss goes through the
// logistic link (g = p - u, h = p(1 - p)).
GradHess ComputeGradHess(Loss loss, double truth, double raw);

struct BoostParams {
  std::size_t rounds = 100;
  double learning_rate = 0.1;
  double gamma = 0.0;
  double lambda = 1.0;
  int max_depth = 6;
  std::size_t max_bins = 256;
  Loss loss = Loss::kLogLoss;
  BoostMode mode = BoostMode::kExact;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct BoostPrediction {
  double raw = 0.0;
  // Log loss only.
  std::optional<double> proba;
};

class BoostedModel final : public Classifier {
 public:
  using Classifier::Predict;
  using Classifier::PredictProba;

  BoostedModel(std::size_t width, double base_score, std::vector<Tree> trees, BoostParams params);

  ModelKind kind() const override { return ModelKind::kBoosted; }
  std::size_t width() const override { return width_; }
  // Log loss only; squared-error models throw TaskMismatch.
  ClassProba PredictProba(std::span<const double> row) const override;

  BoostPrediction PredictBoosted(std::span<const double> row) const;
  double PredictRaw(std::span<const double> row) const;

  // Sum over trees of gamma * leaves + lambda/2 * sum w^2, with w the leaf
  // values as stored (already shrunk by the learning rate).
  double RegularizationValue() const;
  // Training objective: summed loss plus regularization.
  double Objective(const FeatureMatrix& m, std::span<const double> targets) const;
  // Model made of the first k trees.
  BoostedModel Truncated(std::size_t k) const;

  double base_score() const { return base_score_; }
  const std::vector<Tree>& trees() const { return trees_; }
  const BoostParams& params() const { return params_; }

 private:
  std::size_t width_;
  double base_score_;
  std::vector<Tree> trees_;
  BoostParams params_;
};

// Labels from the matrix are the targets.
BoostedModel FitBoosted(const FeatureMatrix& m, const BoostParams& params);
BoostedModel FitBoosted(const FeatureMatrix& m, std::span<const double> targets,
                        const BoostParams& params);

}  // namespace wve

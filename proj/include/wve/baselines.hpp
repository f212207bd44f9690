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

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "wve/boosting.hpp"
#include "wve/classifier.hpp"
#include "wve/tabular.hpp"
#include "wve/tree.hpp"

namespace wve {

// Per-column z-scoring fitted on training rows. Columns with (near) zero
// spread keep a unit divisor.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Standardizer Fit(const FeatureMatrix& m);
  void Apply(std::span<const double> row, std::span<double> out) const;
};

// w.x + b over standardized inputs. Logistic models report logistic(margin);
// the SVM reports the same squash but decides by the sign of the margin.
class LinearModel final : public Classifier {
 public:
  using Classifier::Predict;
  using Classifier::PredictProba;

  LinearModel(ModelKind kind, std::vector<double> weights, double bias, Standardizer scaler);

  ModelKind kind() const override { return kind_; }
  std::size_t width() const override { return weights_.size(); }
  ClassProba PredictProba(std::span<const double> row) const override;
  int Predict(std::span<const double> row) const override;

  double Margin(std::span<const double> row) const;
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  const Standardizer& scaler() const { return scaler_; }

 private:
  ModelKind kind_;
  std::vector<double> weights_;
  double bias_;
  Standardizer scaler_;
};

struct LogisticParams {
  std::size_t epochs = 500;
  double step = 0.1;
};

// Full-batch gradient descent on mean log loss.
LinearModel FitLogistic(const FeatureMatrix& m, const LogisticParams& params = {});

struct SvmParams {
  std::size_t epochs = 500;
  double step = 0.1;
  double reg = 1e-2;
};

// Full-batch subgradient descent on reg/2 |w|^2 + mean hinge loss with a
// step of step / sqrt(epoch + 1).
LinearModel FitLinearSvm(const FeatureMatrix& m, const SvmParams& params = {});

class KnnModel final : public Classifier {
 public:
  using Classifier::Predict;
  using Classifier::PredictProba;

  KnnModel(std::size_t k, Standardizer scaler, std::size_t rows, std::vector<double> train,
           std::vector<int> labels);

  ModelKind kind() const override { return ModelKind::kKnn; }
  std::size_t width() const override { return scaler_.mean.size(); }
  // Neighbor vote fractions; distance ties go to the lower training row.
  ClassProba PredictProba(std::span<const double> row) const override;

  std::size_t k() const { return k_; }
  std::size_t rows() const { return rows_; }
  const Standardizer& scaler() const { return scaler_; }
  const std::vector<double>& train() const { return train_; }
  const std::vector<int>& labels() const { return labels_; }

 private:
  std::size_t k_;
  Standardizer scaler_;
  std::size_t rows_;
  std::vector<double> train_;
  std::vector<int> labels_;
};

// k must be odd and at most the row count, else BadK.
KnnModel FitKnn(const FeatureMatrix& m, std::size_t k = 5);

class GaussianNbModel final : public Classifier {
 public:
  using Classifier::Predict;
  using Classifier::PredictProba;

  GaussianNbModel(std::array<double, 2> priors, std::array<std::vector<double>, 2> means,
                  std::array<std::vector<double>, 2> variances);

  ModelKind kind() const override { return ModelKind::kGaussianNb; }
  std::size_t width() const override { return means_[0].size(); }
  ClassProba PredictProba(std::span<const double> row) const override;

  // log prior + sum of per-column Gaussian log densities.
  std::array<double, 2> JointLogLikelihood(std::span<const double> row) const;

  const std::array<double, 2>& priors() const { return priors_; }
  const std::array<std::vector<double>, 2>& means() const { return means_; }
  const std::array<std::vector<double>, 2>& variances() const { return variances_; }

 private:
  std::array<double, 2> priors_;
  std::array<std::vector<double>, 2> means_;
  std::array<std::vector<double>, 2> variances_;
};

GaussianNbModel FitGaussianNb(const FeatureMatrix& m, double variance_floor = 1e-9);

// Single gini tree; leaf value is the positive-class fraction.
class DecisionTreeModel final : public Classifier {
 public:
  using Classifier::Predict;
  using Classifier::PredictProba;

  explicit DecisionTreeModel(Tree tree);

  ModelKind kind() const override { return ModelKind::kDecisionTree; }
  std::size_t width() const override { return tree_.width; }
  ClassProba PredictProba(std::span<const double> row) const override;

  const Tree& tree() const { return tree_; }

 private:
  Tree tree_;
};

DecisionTreeModel FitBaselineTree(const FeatureMatrix& m, const GrowthParams& params = {});

// Exact-mode log-loss boosting with baseline defaults.
BoostParams BaselineBoostParams();
BoostedModel FitBaselineBoosting(const FeatureMatrix& m, const BoostParams& params = BaselineBoostParams());

}  // namespace wve

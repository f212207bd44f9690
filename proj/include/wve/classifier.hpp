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
#include <span>
#include <string_view>
#include <vector>

#include "wve/tabular.hpp"

namespace wve {

enum class ModelKind {
  kForest,
  kBoosted,
  kWeightedEnsemble,
  kLogistic,
  kLinearSvm,
  kKnn,
  kGaussianNb,
  kDecisionTree,
};

std::string_view ModelKindName(ModelKind kind);
ModelKind ParseModelKind(std::string_view name);

// (P(class 0), P(class 1)).
using ClassProba = std::array<double, 2>;

// Binary classifier contract shared by every model: probabilities sum to
// one and Predict is their argmax with ties going to class 0.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual ModelKind kind() const = 0;
  virtual std::size_t width() const = 0;
  virtual ClassProba PredictProba(std::span<const double> row) const = 0;
  virtual int Predict(std::span<const double> row) const;

  std::vector<ClassProba> PredictProba(const FeatureMatrix& m) const;
  std::vector<int> Predict(const FeatureMatrix& m) const;
  std::vector<double> PredictPositive(const FeatureMatrix& m) const;

 protected:
  void CheckWidth(std::span<const double> row) const;
};

inline int ArgmaxClass(const ClassProba& p) { return p[1] > p[0] ? 1 : 0; }

}  // namespace wve

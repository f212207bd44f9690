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

#include "wve/classifier.hpp"

#include <string>

#include "wve/error.hpp"

namespace wve {

std::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kForest: return "forest";
    case ModelKind::kBoosted: return "boosted";
    case ModelKind::kWeightedEnsemble: return "wve";
    case ModelKind::kLogistic: return "logistic";
    case ModelKind::kLinearSvm: return "linear_svm";
    case ModelKind::kKnn: return "knn";
    case ModelKind::kGaussianNb: return "gaussian_nb";
    case ModelKind::kDecisionTree: return "decision_tree";
  }
  return "unknown";
}

ModelKind ParseModelKind(std::string_view name) {
  for (ModelKind k : {ModelKind::kForest, ModelKind::kBoosted, ModelKind::kWeightedEnsemble,
                      ModelKind::kLogistic, ModelKind::kLinearSvm, ModelKind::kKnn,
                      ModelKind::kGaussianNb, ModelKind::kDecisionTree}) {
    if (ModelKindName(k) == name) return k;
  }
  throw Error(ErrorKind::kSchemaViolation, "unknown model kind '" + std::string(name) + "'");
}

int Classifier::Predict(std::span<const double> row) const { return ArgmaxClass(PredictProba(row)); }

std::vector<ClassProba> Classifier::PredictProba(const FeatureMatrix& m) const {
  std::vector<ClassProba> out;
  out.reserve(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) out.push_back(PredictProba(m.row(i)));
  return out;
}

std::vector<int> Classifier::Predict(const FeatureMatrix& m) const {
  std::vector<int> out;
  out.reserve(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) out.push_back(Predict(m.row(i)));
  return out;
}

std::vector<double> Classifier::PredictPositive(const FeatureMatrix& m) const {
  std::vector<double> out;
  out.reserve(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) out.push_back(PredictProba(m.row(i))[1]);
  return out;
}

void Classifier::CheckWidth(std::span<const double> row) const {
  if (row.size() != width()) {
    throw Error(ErrorKind::kWidthMismatch, "row has " + std::to_string(row.size()) +
                                               " columns, model expects " + std::to_string(width()));
  }
}

}  // namespace wve

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

#include "wve/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include "wve/error.hpp"

namespace wve {
namespace {

void RequireLabels(const FeatureMatrix& m) {
  Require(m.rows > 0, ErrorKind::kInvalidArgument, "cannot fit on zero rows");
  Require(m.labels.size() == m.rows, ErrorKind::kInvalidArgument, "matrix has no labels");
}

std::vector<double> StandardizeAll(const FeatureMatrix& m, const Standardizer& s) {
  std::vector<double> out(m.values.size());
  for (std::size_t i = 0; i < m.rows; ++i) {
    s.Apply(m.row(i), std::span<double>(out.data() + i * m.cols, m.cols));
  }
  return out;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

}  // namespace

Standardizer Standardizer::Fit(const FeatureMatrix& m) {
  Require(m.rows > 0, ErrorKind::kInvalidArgument, "cannot standardize zero rows");
  Standardizer s;
  s.mean.assign(m.cols, 0.0);
  s.stddev.assign(m.cols, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) s.mean[j] += m.at(i, j);
  }
  for (double& v : s.mean) v /= static_cast<double>(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      const double d = m.at(i, j) - s.mean[j];
      s.stddev[j] += d * d;
    }
  }
  for (double& v : s.stddev) {
    v = std::sqrt(v / static_cast<double>(m.rows));
    if (v < 1e-12) v = 1.0;
  }
  return s;
}

void Standardizer::Apply(std::span<const double> row, std::span<double> out) const {
  for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - mean[j]) / stddev[j];
}

LinearModel::LinearModel(ModelKind kind, std::vector<double> weights, double bias, Standardizer scaler)
    : kind_(kind), weights_(std::move(weights)), bias_(bias), scaler_(std::move(scaler)) {
  Require(kind_ == ModelKind::kLogistic || kind_ == ModelKind::kLinearSvm,
          ErrorKind::kInvalidArgument, "linear model kind must be logistic or linear_svm");
  Require(scaler_.mean.size() == weights_.size() && scaler_.stddev.size() == weights_.size(),
          ErrorKind::kWidthMismatch, "standardizer width differs from weight width");
}

double LinearModel::Margin(std::span<const double> row) const {
  CheckWidth(row);
  double z = bias_;
  for (std::size_t j = 0; j < row.size(); ++j) {
    z += weights_[j] * (row[j] - scaler_.mean[j]) / scaler_.stddev[j];
  }
  return z;
}

ClassProba LinearModel::PredictProba(std::span<const double> row) const {
  const double p = Logistic(Margin(row));
  return {1.0 - p, p};
}

int LinearModel::Predict(std::span<const double> row) const {
  if (kind_ == ModelKind::kLinearSvm) return Margin(row) >= 0.0 ? 1 : 0;
  return Classifier::Predict(row);
}

LinearModel FitLogistic(const FeatureMatrix& m, const LogisticParams& params) {
  RequireLabels(m);
  Require(params.step > 0.0, ErrorKind::kInvalidArgument, "step size must be positive");
  Standardizer scaler = Standardizer::Fit(m);
  const auto x = StandardizeAll(m, scaler);
  const double n = static_cast<double>(m.rows);

  std::vector<double> w(m.cols, 0.0);
  double b = 0.0;
  std::vector<double> grad(m.cols);
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    double loss = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) {
      const std::span<const double> xi(x.data() + i * m.cols, m.cols);
      const double z = b + Dot(w, xi);
      const double p = Logistic(z);
      const double r = p - m.labels[i];
      for (std::size_t j = 0; j < m.cols; ++j) grad[j] += r * xi[j];
      grad_b += r;
      // log(1 + e^z) - y z, computed stably.
      loss += std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))) - m.labels[i] * z;
    }
    if (!std::isfinite(loss)) {
      throw Error(ErrorKind::kNonFinite, "logistic loss diverged at epoch " + std::to_string(epoch));
    }
    for (std::size_t j = 0; j < m.cols; ++j) w[j] -= params.step * grad[j] / n;
    b -= params.step * grad_b / n;
  }
  for (double v : w) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, "logistic weights diverged");
  }
  return LinearModel(ModelKind::kLogistic, std::move(w), b, std::move(scaler));
}

LinearModel FitLinearSvm(const FeatureMatrix& m, const SvmParams& params) {
  RequireLabels(m);
  Require(params.step > 0.0 && params.reg >= 0.0, ErrorKind::kInvalidArgument,
          "step must be positive and reg nonnegative");
  Standardizer scaler = Standardizer::Fit(m);
  const auto x = StandardizeAll(m, scaler);
  const double n = static_cast<double>(m.rows);

  std::vector<double> w(m.cols, 0.0);
  double b = 0.0;
  std::vector<double> grad(m.cols);
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    for (std::size_t j = 0; j < m.cols; ++j) grad[j] = params.reg * w[j];
    double grad_b = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) {
      const std::span<const double> xi(x.data() + i * m.cols, m.cols);
      const double y = m.labels[i] == 1 ? 1.0 : -1.0;
      if (y * (b + Dot(w, xi)) < 1.0) {
        for (std::size_t j = 0; j < m.cols; ++j) grad[j] -= y * xi[j] / n;
        grad_b -= y / n;
      }
    }
    const double eta = params.step / std::sqrt(static_cast<double>(epoch) + 1.0);
    for (std::size_t j = 0; j < m.cols; ++j) w[j] -= eta * grad[j];
    b -= eta * grad_b;
    if (!std::isfinite(b)) throw Error(ErrorKind::kNonFinite, "SVM bias diverged");
  }
  for (double v : w) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, "SVM weights diverged");
  }
  return LinearModel(ModelKind::kLinearSvm, std::move(w), b, std::move(scaler));
}

KnnModel::KnnModel(std::size_t k, Standardizer scaler, std::size_t rows, std::vector<double> train,
                   std::vector<int> labels)
    : k_(k), scaler_(std::move(scaler)), rows_(rows), train_(std::move(train)), labels_(std::move(labels)) {
  if (k_ == 0 || k_ % 2 == 0 || k_ > rows_) {
    throw Error(ErrorKind::kBadK, "k must be odd and in [1, " + std::to_string(rows_) + "], got " +
                                      std::to_string(k_));
  }
  Require(train_.size() == rows_ * scaler_.mean.size() && labels_.size() == rows_,
          ErrorKind::kLengthMismatch, "stored training data has inconsistent size");
}

ClassProba KnnModel::PredictProba(std::span<const double> row) const {
  CheckWidth(row);
  const std::size_t d = width();
  std::vector<double> q(d);
  scaler_.Apply(row, q);
  std::vector<std::pair<double, std::size_t>> dist(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = train_[i * d + j] - q[j];
      s += diff * diff;
    }
    dist[i] = {s, i};
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end());
  std::size_t positive = 0;
  for (std::size_t i = 0; i < k_; ++i) positive += labels_[dist[i].second] == 1;
  const double p = static_cast<double>(positive) / static_cast<double>(k_);
  return {1.0 - p, p};
}

KnnModel FitKnn(const FeatureMatrix& m, std::size_t k) {
  RequireLabels(m);
  if (k == 0 || k % 2 == 0 || k > m.rows) {
    throw Error(ErrorKind::kBadK, "k must be odd and in [1, " + std::to_string(m.rows) + "], got " +
                                      std::to_string(k));
  }
  Standardizer scaler = Standardizer::Fit(m);
  auto train = StandardizeAll(m, scaler);
  return KnnModel(k, std::move(scaler), m.rows, std::move(train), m.labels);
}

GaussianNbModel::GaussianNbModel(std::array<double, 2> priors, std::array<std::vector<double>, 2> means,
                                 std::array<std::vector<double>, 2> variances)
    : priors_(priors), means_(std::move(means)), variances_(std::move(variances)) {
  Require(means_[0].size() == means_[1].size() && variances_[0].size() == means_[0].size() &&
              variances_[1].size() == means_[0].size(),
          ErrorKind::kWidthMismatch, "naive Bayes parameter widths differ");
  Require(priors_[0] > 0.0 && priors_[1] > 0.0, ErrorKind::kInvalidArgument,
          "class priors must be positive");
  for (const auto& vs : variances_) {
    for (double v : vs) Require(v > 0.0, ErrorKind::kInvalidArgument, "variances must be positive");
  }
}

std::array<double, 2> GaussianNbModel::JointLogLikelihood(std::span<const double> row) const {
  CheckWidth(row);
  std::array<double, 2> out{};
  for (int c = 0; c < 2; ++c) {
    double ll = std::log(priors_[c]);
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double var = variances_[c][j];
      const double d = row[j] - means_[c][j];
      ll += -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * d * d / var;
    }
    out[c] = ll;
  }
  return out;
}

ClassProba GaussianNbModel::PredictProba(std::span<const double> row) const {
  const auto ll = JointLogLikelihood(row);
  const double top = std::max(ll[0], ll[1]);
  const double e0 = std::exp(ll[0] - top);
  const double e1 = std::exp(ll[1] - top);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

GaussianNbModel FitGaussianNb(const FeatureMatrix& m, double variance_floor) {
  RequireLabels(m);
  Require(variance_floor > 0.0, ErrorKind::kInvalidArgument, "variance floor must be positive");
  std::array<double, 2> counts{0.0, 0.0};
  std::array<std::vector<double>, 2> means{std::vector<double>(m.cols, 0.0),
                                           std::vector<double>(m.cols, 0.0)};
  std::array<std::vector<double>, 2> vars = means;
  for (std::size_t i = 0; i < m.rows; ++i) {
    const int c = m.labels[i];
    counts[c] += 1.0;
    for (std::size_t j = 0; j < m.cols; ++j) means[c][j] += m.at(i, j);
  }
  Require(counts[0] > 0.0 && counts[1] > 0.0, ErrorKind::kInvalidArgument,
          "naive Bayes needs both classes");
  for (int c = 0; c < 2; ++c) {
    for (double& v : means[c]) v /= counts[c];
  }
  for (std::size_t i = 0; i < m.rows; ++i) {
    const int c = m.labels[i];
    for (std::size_t j = 0; j < m.cols; ++j) {
      const double d = m.at(i, j) - means[c][j];
      vars[c][j] += d * d;
    }
  }
  for (int c = 0; c < 2; ++c) {
    for (double& v : vars[c]) v = std::max(v / counts[c], variance_floor);
  }
  const double n = static_cast<double>(m.rows);
  return GaussianNbModel({counts[0] / n, counts[1] / n}, std::move(means), std::move(vars));
}

DecisionTreeModel::DecisionTreeModel(Tree tree) : tree_(std::move(tree)) {}

ClassProba DecisionTreeModel::PredictProba(std::span<const double> row) const {
  CheckWidth(row);
  const double p = tree_.Predict(row);
  return {1.0 - p, p};
}

DecisionTreeModel FitBaselineTree(const FeatureMatrix& m, const GrowthParams& params) {
  RequireLabels(m);
  GrowthParams p = params;
  p.criterion = Criterion::kGini;
  std::vector<double> targets(m.labels.begin(), m.labels.end());
  return DecisionTreeModel(GrowTree(m, targets, p));
}

BoostParams BaselineBoostParams() {
  BoostParams p;
  p.rounds = 100;
  p.learning_rate = 0.1;
  p.max_depth = 3;
  p.lambda = 1.0;
  p.gamma = 0.0;
  p.loss = Loss::kLogLoss;
  p.mode = BoostMode::kExact;
  return p;
}

BoostedModel FitBaselineBoosting(const FeatureMatrix& m, const BoostParams& params) {
  RequireLabels(m);
  BoostParams p = params;
  p.mode = BoostMode::kExact;
  p.loss = Loss::kLogLoss;
  return FitBoosted(m, p);
}

}  // namespace wve

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
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace wve {

// Positive class is 1 (stroke). Rows of the matrix are true labels,
// columns predicted labels.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix ComputeConfusion(std::span<const int> y_true, std::span<const int> y_pred);

enum class Averaging { kPositiveClass, kMacro };

std::string_view AveragingName(Averaging averaging);
Averaging ParseAveraging(std::string_view name);

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  // Harmonic mean of the reported precision and recall.
  double f1 = 0.0;
  Averaging averaging = Averaging::kMacro;
  std::optional<double> mean_log_loss;

  std::string ToKeyValueText() const;
};

// Ratios with a zero denominator are reported as 0.
MetricsReport ClassificationReport(const ConfusionMatrix& cm, Averaging averaging);

// Mean binary log loss with probabilities clipped to [1e-15, 1 - 1e-15].
double MeanLogLoss(std::span<const int> y_true, std::span<const double> proba_positive);

enum class BmiBand { kUnderweight, kNormal, kOverweight, kObese, kExtremelyObese };
enum class GlucoseBand { kBelowRange, kNormal, kElevated, kHigh, kAboveRange };

// [18.5, 25) normal, [25, 30) overweight, [30, 35) obese, 35+ extremely
// obese, below 18.5 underweight.
BmiBand ClassifyBmi(double bmi);

// The published glucose bands overlap; a value takes the most severe band
// containing it: [220, 300] high, [190, 220) elevated, [170, 190) normal.
GlucoseBand ClassifyGlucose(double glucose);

std::string_view BmiBandName(BmiBand band);
std::string_view GlucoseBandName(GlucoseBand band);

}  // namespace wve

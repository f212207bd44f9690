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

#include "wve/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "wve/error.hpp"

namespace wve {
namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double Harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

std::string FormatDouble(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6f", v);
  return buffer;
}

}  // namespace

ConfusionMatrix ComputeConfusion(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) {
    throw Error(ErrorKind::kLengthMismatch, "label vectors differ in length");
  }
  Require(!y_true.empty(), ErrorKind::kInvalidArgument, "empty label vectors");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    Require((t == 0 || t == 1) && (p == 0 || p == 1), ErrorKind::kInvalidArgument,
            "labels must be 0 or 1");
    if (t == 1) {
      (p == 1 ? cm.tp : cm.fn)++;
    } else {
      (p == 1 ? cm.fp : cm.tn)++;
    }
  }
  return cm;
}

std::string_view AveragingName(Averaging averaging) {
  return averaging == Averaging::kMacro ? "macro" : "positive";
}

Averaging ParseAveraging(std::string_view name) {
  if (name == "macro") return Averaging::kMacro;
  if (name == "positive" || name == "positive-class" || name == "binary") {
    return Averaging::kPositiveClass;
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown averaging '" + std::string(name) + "'");
}

MetricsReport ClassificationReport(const ConfusionMatrix& cm, Averaging averaging) {
  Require(cm.total() > 0, ErrorKind::kInvalidArgument, "empty confusion matrix");
  MetricsReport r;
  r.averaging = averaging;
  r.accuracy = Ratio(cm.tp + cm.tn, cm.total());
  const double p1 = Ratio(cm.tp, cm.tp + cm.fp);
  const double r1 = Ratio(cm.tp, cm.tp + cm.fn);
  if (averaging == Averaging::kPositiveClass) {
    r.precision = p1;
    r.recall = r1;
  } else {
    const double p0 = Ratio(cm.tn, cm.tn + cm.fn);
    const double r0 = Ratio(cm.tn, cm.tn + cm.fp);
    r.precision = 0.5 * (p1 + p0);
    r.recall = 0.5 * (r1 + r0);
  }
  r.f1 = Harmonic(r.precision, r.recall);
  return r;
}

std::string MetricsReport::ToKeyValueText() const {
  std::ostringstream out;
  out << "averaging = " << AveragingName(averaging) << '\n';
  out << "precision = " << FormatDouble(precision) << '\n';
  out << "recall = " << FormatDouble(recall) << '\n';
  out << "f1 = " << FormatDouble(f1) << '\n';
  out << "accuracy = " << FormatDouble(accuracy) << '\n';
  if (mean_log_loss) out << "mean_log_loss = " << FormatDouble(*mean_log_loss) << '\n';
  return out.str();
}

double MeanLogLoss(std::span<const int> y_true, std::span<const double> proba_positive) {
  if (y_true.size() != proba_positive.size()) {
    throw Error(ErrorKind::kLengthMismatch, "label and probability vectors differ in length");
  }
  Require(!y_true.empty(), ErrorKind::kInvalidArgument, "empty label vector");
  constexpr double kEps = 1e-15;
  double total = 0.0;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const double p = std::clamp(proba_positive[i], kEps, 1.0 - kEps);
    total += y_true[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(y_true.size());
}

BmiBand ClassifyBmi(double bmi) {
  if (!(bmi > 0.0)) throw Error(ErrorKind::kDomainError, "BMI must be positive");
  if (bmi < 18.5) return BmiBand::kUnderweight;
  if (bmi < 25.0) return BmiBand::kNormal;
  if (bmi < 30.0) return BmiBand::kOverweight;
  if (bmi < 35.0) return BmiBand::kObese;
  return BmiBand::kExtremelyObese;
}

GlucoseBand ClassifyGlucose(double glucose) {
  if (!(glucose > 0.0)) throw Error(ErrorKind::kDomainError, "glucose must be positive");
  if (glucose > 300.0) return GlucoseBand::kAboveRange;
  if (glucose >= 220.0) return GlucoseBand::kHigh;
  if (glucose >= 190.0) return GlucoseBand::kElevated;
  if (glucose >= 170.0) return GlucoseBand::kNormal;
  return GlucoseBand::kBelowRange;
}

std::string_view BmiBandName(BmiBand band) {
  switch (band) {
    case BmiBand::kUnderweight: return "underweight";
    case BmiBand::kNormal: return "normal";
    case BmiBand::kOverweight: return "overweight";
    case BmiBand::kObese: return "obese";
    case BmiBand::kExtremelyObese: return "extremely-obese";
  }
  return "normal";
}

std::string_view GlucoseBandName(GlucoseBand band) {
  switch (band) {
    case GlucoseBand::kBelowRange: return "below-range";
    case GlucoseBand::kNormal: return "normal";
    case GlucoseBand::kElevated: return "elevated";
    case GlucoseBand::kHigh: return "high";
    case GlucoseBand::kAboveRange: return "above-range";
  }
  return "normal";
}

}  // namespace wve

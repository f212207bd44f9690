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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wve/boosting.hpp"
#include "wve/error.hpp"
#include "wve/rng.hpp"

namespace wve {
namespace {

// Central difference of the loss as a function of the raw score; squared
// error is taken in its half form.
double NumericGradient(Loss loss, double u, double s, double step = 1e-5) {
  auto f = [&](double raw) {
    return loss == Loss::kLogLoss ? LossValue(loss, u, Logistic(raw)) : 0.5 * LossValue(loss, u, raw);
  };
  return (f(s + step) - f(s - step)) / (2.0 * step);
}

// 1-D golden-section minimization of sum(g*w + h*w^2/2) + lambda*w^2/2.
double NumericLeafWeight(double g, double h, double lambda) {
  auto f = [&](double w) { return g * w + 0.5 * (h + lambda) * w * w; };
  double a = -100.0;
  double b = 100.0;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double c = b - r * (b - a);
    const double d = a + r * (b - a);
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return 0.5 * (a + b);
}

TEST(LossValue, Examples) {
  EXPECT_DOUBLE_EQ(LossValue(Loss::kSquaredError, 1.0, 0.5), 0.25);
  EXPECT_NEAR(LossValue(Loss::kLogLoss, 1.0, 0.5), 0.693147, 1e-6);
  const double clipped = LossValue(Loss::kLogLoss, 1.0, 0.0);
  EXPECT_TRUE(std::isfinite(clipped));
  EXPECT_DOUBLE_EQ(clipped, -std::log(1e-15));
}

TEST(LossValue, LogLossRejectsNonBinaryTruth) {
  try {
    LossValue(Loss::kLogLoss, 0.5, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDomainError);
  }
}

TEST(GradHess, Examples) {
  const GradHess log = ComputeGradHess(Loss::kLogLoss, 1.0, 0.0);
  EXPECT_NEAR(log.g, NumericGradient(Loss::kLogLoss, 1.0, 0.0), 1e-8);
  EXPECT_DOUBLE_EQ(log.g, -0.5);
  EXPECT_DOUBLE_EQ(log.h, 0.25);
  EXPECT_EQ(ComputeGradHess(Loss::kSquaredError, 2.0, 2.0).g, 0.0);
  const GradHess sq = ComputeGradHess(Loss::kSquaredError, 1.0, 0.5);
  EXPECT_NEAR(sq.g, NumericGradient(Loss::kSquaredError, 1.0, 0.5), 1e-8);
  EXPECT_DOUBLE_EQ(sq.g, -0.5);
  EXPECT_EQ(sq.h, 1.0);
}

TEST(GradHess, HessianNonNegative) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double s = rng.Uniform(-40.0, 40.0);
    EXPECT_GE(ComputeGradHess(Loss::kLogLoss, static_cast<double>(i % 2), s).h, 0.0);
  }
}

TEST(LeafWeight, Examples) {
  EXPECT_EQ(LeafWeight(0.0, 3.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(LeafWeight(2.0, 3.0, 1.0), -0.5);
  EXPECT_NEAR(NumericLeafWeight(2.0, 3.0, 1.0), -0.5, 1e-6);
  EXPECT_LT(std::abs(LeafWeight(2.0, 3.0, 2.0)), std::abs(LeafWeight(2.0, 3.0, 1.0)));
}

TEST(LeafWeight, SingularRaises) {
  try {
    LeafWeight(1.0, 0.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSingularLeaf);
  }
}

TEST(SplitGain, Examples) {
  EXPECT_DOUBLE_EQ(SplitGain(-2.0, 1.0, 2.0, 1.0, 0.0, 0.0), 4.0);
  EXPECT_DOUBLE_EQ(SplitGain(1.5, 2.0, 1.5, 2.0, 0.0, 0.3), -0.3);
  EXPECT_GT(SplitGain(-2.0, 1.0, 2.0, 1.0, 1.0, 0.1), SplitGain(-2.0, 1.0, 2.0, 1.0, 1.0, 0.2));
}

TEST(SplitGain, MatchesObjectiveReduction) {
  // Gain equals the drop of the optimal quadratic objective from parent to children.
  auto best = [](double g, double h, double lambda) { return -0.5 * g * g / (h + lambda); };
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const double gl = rng.Uniform(-5, 5), hl = rng.Uniform(0, 4);
    const double gr = rng.Uniform(-5, 5), hr = rng.Uniform(0, 4);
    const double lambda = rng.Uniform(0.1, 2);
    const double expected = best(gl + gr, hl + hr, lambda) - best(gl, hl, lambda) - best(gr, hr, lambda);
    EXPECT_NEAR(SplitGain(gl, hl, gr, hr, lambda, 0.0), expected, 1e-12);
  }
}

TEST(Regularization, Examples) {
  BoostParams p;
  p.gamma = 1.0;
  p.lambda = 2.0;
  EXPECT_EQ(BoostedModel(1, 0.0, {}, p).RegularizationValue(), 0.0);
  const BoostedModel stump(1, 0.0, {Tree::Stump(1, 0, 0.5, 1.0, -1.0)}, p);
  EXPECT_DOUBLE_EQ(stump.RegularizationValue(), 4.0);
  p.gamma = 0.0;
  p.lambda = 0.0;
  EXPECT_EQ(BoostedModel(1, 0.0, {Tree::Stump(1, 0, 0.5, 3.0, -7.0)}, p).RegularizationValue(), 0.0);
}

TEST(PredictBoosted, SumOfTreesAndLogistic) {
  BoostParams p;
  const BoostedModel m(1, 0.0, {Tree::Leaf(1, 0.3), Tree::Leaf(1, -0.1)}, p);
  const std::vector<double> row = {0.0};
  EXPECT_DOUBLE_EQ(m.PredictRaw(row), 0.2);
  const BoostedModel zero(1, 0.0, {}, p);
  EXPECT_EQ(*zero.PredictBoosted(row).proba, 0.5);
  const BoostedModel base(1, 1.25, {}, p);
  EXPECT_EQ(base.PredictRaw(row), 1.25);
}

TEST(FitBoosted, ZeroRoundsGivesBaseScore) {
  const FeatureMatrix m = MakeMatrix(4, 1, {1, 2, 3, 4}, {0, 1, 1, 1});
  BoostParams p;
  p.rounds = 0;
  const BoostedModel model = FitBoosted(m, p);
  EXPECT_DOUBLE_EQ(model.base_score(), std::log(3.0));
  p.loss = Loss::kSquaredError;
  EXPECT_DOUBLE_EQ(FitBoosted(m, p).base_score(), 0.75);
}

TEST(FitBoosted, SquaredErrorHasNoProbabilities) {
  const FeatureMatrix m = MakeMatrix(4, 1, {1, 2, 3, 4}, {0, 1, 1, 1});
  BoostParams p;
  p.rounds = 3;
  p.loss = Loss::kSquaredError;
  const BoostedModel model = FitBoosted(m, std::vector<double>{0.5, 1.5, 2.5, 9.0}, p);
  EXPECT_FALSE(model.PredictBoosted(m.row(0)).proba.has_value());
  EXPECT_THROW(model.PredictProba(m.row(0)), Error);
}

TEST(FitBoosted, ObjectiveNonIncreasing) {
  const FeatureMatrix m = testing::SyntheticMatrix(200, 4);
  BoostParams p;
  p.rounds = 50;
  const BoostedModel model = FitBoosted(m, p);
  const auto y = testing::Targets(m);
  double previous = model.Truncated(0).Objective(m, y);
  for (std::size_t k = 1; k <= 50; ++k) {
    const double current = model.Truncated(k).Objective(m, y);
    EXPECT_LE(current, previous) << "round " << k;
    previous = current;
  }
}

TEST(FitBoosted, HistogramMatchesExactWhenLossless) {
  const FeatureMatrix m = testing::SyntheticMatrix(200, 5);
  ASSERT_LE(testing::MaxDistinct(m), 256u);
  BoostParams p;
  p.rounds = 20;
  const BoostedModel exact = FitBoosted(m, p);
  p.mode = BoostMode::kHistogram;
  const BoostedModel hist = FitBoosted(m, p);
  ASSERT_EQ(exact.trees().size(), hist.trees().size());
  for (std::size_t k = 0; k < exact.trees().size(); ++k) {
    ASSERT_EQ(exact.trees()[k].nodes.size(), hist.trees()[k].nodes.size());
    for (std::size_t n = 0; n < exact.trees()[k].nodes.size(); ++n) {
      EXPECT_EQ(exact.trees()[k].nodes[n].feature, hist.trees()[k].nodes[n].feature);
      EXPECT_EQ(exact.trees()[k].nodes[n].threshold, hist.trees()[k].nodes[n].threshold);
      EXPECT_EQ(exact.trees()[k].nodes[n].value, hist.trees()[k].nodes[n].value);
    }
  }
  for (std::size_t i = 0; i < m.rows; ++i) EXPECT_EQ(exact.PredictRaw(m.row(i)), hist.PredictRaw(m.row(i)));
}

TEST(FitBoosted, HistogramDiffersWhenLossy) {
  const FeatureMatrix m = testing::SyntheticMatrix(600, 6);
  BoostParams p;
  p.rounds = 10;
  p.mode = BoostMode::kHistogram;
  p.max_bins = 4;
  const BoostedModel hist = FitBoosted(m, p);
  p.mode = BoostMode::kExact;
  const BoostedModel exact = FitBoosted(m, p);
  bool any_difference = false;
  for (std::size_t i = 0; i < m.rows && !any_difference; ++i) {
    any_difference = exact.PredictRaw(m.row(i)) != hist.PredictRaw(m.row(i));
  }
  EXPECT_TRUE(any_difference);
}

TEST(FitBoosted, PositiveGammaPrunesSplits) {
  const FeatureMatrix m = testing::SyntheticMatrix(300, 7);
  BoostParams p;
  p.rounds = 5;
  p.gamma = 1e6;
  const BoostedModel model = FitBoosted(m, p);
  for (const auto& t : model.trees()) EXPECT_EQ(t.leaf_count(), 1u);
}

TEST(FitBoosted, DeterministicAndLearns) {
  const auto data = testing::SyntheticHoldout(800, 8);
  BoostParams p;
  p.rounds = 60;
  const BoostedModel a = FitBoosted(data.train, p);
  const BoostedModel b = FitBoosted(data.train, p);
  EXPECT_EQ(a.PredictPositive(data.test), b.PredictPositive(data.test));
  std::size_t hits = 0;
  const auto labels = a.Predict(data.test);
  for (std::size_t i = 0; i < data.test.rows; ++i) hits += labels[i] == data.test.labels[i];
  EXPECT_GT(static_cast<double>(hits) / static_cast<double>(data.test.rows), 0.75);
}

TEST(BoostParams, Validation) {
  const FeatureMatrix m = MakeMatrix(2, 1, {1, 2}, {0, 1});
  BoostParams p;
  p.learning_rate = 0.0;
  EXPECT_THROW(FitBoosted(m, p), Error);
  p = BoostParams{};
  p.lambda = -1.0;
  EXPECT_THROW(FitBoosted(m, p), Error);
  p = BoostParams{};
  p.mode = BoostMode::kHistogram;
  p.max_bins = 1;
  EXPECT_THROW(FitBoosted(m, p), Error);
}

}  // namespace
}  // namespace wve

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

// Randomized checks of cross-module invariants. Every case is seeded, so a
// failure reproduces exactly.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wve/boosting.hpp"
#include "wve/forest.hpp"
#include "wve/metrics.hpp"
#include "wve/rng.hpp"
#include "wve/tabular.hpp"
#include "wve/tree.hpp"
#include "wve/voting.hpp"

namespace wve {
namespace {

// Replaces a random subset of cells with out-of-domain or missing values.
RawTable Corrupt(RawTable t, Rng& rng) {
  for (auto& r : t.rows) {
    switch (rng.Below(6)) {
      case 0: r[stroke::kSmoking] = std::string("Unknown"); break;
      case 1: r[stroke::kBmi] = rng.Uniform(80.0, 200.0); break;
      case 2: r[stroke::kGlucose] = rng.Uniform(1.0, 20.0); break;
      case 3: r[stroke::kAge] = rng.Uniform(121.0, 300.0); break;
      default: break;
    }
  }
  return t;
}

class Fixed final : public Classifier {
 public:
  explicit Fixed(double p) : p_(p) {}
  ModelKind kind() const override { return ModelKind::kLogistic; }
  std::size_t width() const override { return 1; }
  ClassProba PredictProba(std::span<const double>) const override { return {1.0 - p_, p_}; }

 private:
  double p_;
};

TEST(TabularProperties, ParseSerializeIsIdentity) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const RawTable t = Corrupt(GenerateSynthetic(SynthSpec{rng.Below(300), seed}), rng);
    const RawTable back = ParseTable(SerializeTable(t), StrokeSchema());
    EXPECT_EQ(back.rows, t.rows) << seed;
  }
}

TEST(TabularProperties, DropCleaningLeavesOnlyValidRows) {
  const FeatureSchema schema = StrokeSchema();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const RawTable dirty = Corrupt(GenerateSynthetic(SynthSpec{200, seed}), rng);
    const auto [clean, report] = CleanTable(dirty, CleanPolicy::kDrop);
    EXPECT_EQ(report.input_count, report.retained_count + report.dropped_count);
    std::size_t tallied = 0;
    for (const auto& [key, count] : report.drop_tallies) tallied += count;
    EXPECT_EQ(tallied, report.dropped_count);
    for (const auto& r : clean.rows) {
      EXPECT_NE(std::get<std::string>(r[stroke::kSmoking]), "Unknown");
      for (std::size_t j = 0; j < schema.feature_count(); ++j) {
        if (schema.features[j].range) EXPECT_TRUE(schema.features[j].range->Contains(std::get<double>(r[j])));
      }
    }
  }
}

TEST(TabularProperties, ImputeKeepsEveryRowValid) {
  const FeatureSchema schema = StrokeSchema();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    const RawTable dirty = Corrupt(GenerateSynthetic(SynthSpec{150, seed}), rng);
    const auto [clean, report] = CleanTable(dirty, CleanPolicy::kImputeMode);
    ASSERT_EQ(clean.rows.size(), dirty.rows.size());
    for (const auto& r : clean.rows) {
      EXPECT_NE(std::get<std::string>(r[stroke::kSmoking]), "Unknown");
      for (std::size_t j = 0; j < schema.feature_count(); ++j) {
        if (schema.features[j].range) EXPECT_TRUE(schema.features[j].range->Contains(std::get<double>(r[j])));
      }
    }
  }
}

TEST(TabularProperties, OneHotGroupsSumToOne) {
  const FeatureMatrix m = testing::SyntheticMatrix(500, 3);
  for (std::size_t i = 0; i < m.rows; ++i) {
    std::vector<double> group_sum(m.origin_names.size(), 0.0);
    std::vector<bool> is_categorical(m.origin_names.size(), false);
    for (std::size_t j = 0; j < m.cols; ++j) {
      EXPECT_TRUE(std::isfinite(m.at(i, j)));
      if (m.columns[j].kind != ColumnKind::kCategorical) continue;
      is_categorical[m.columns[j].origin] = true;
      group_sum[m.columns[j].origin] += m.at(i, j);
    }
    for (std::size_t g = 0; g < group_sum.size(); ++g) {
      if (is_categorical[g]) EXPECT_EQ(group_sum[g], 1.0);
    }
  }
}

TEST(TabularProperties, SplitPreservesClassCounts) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 20 + rng.Below(300);
    std::vector<int> labels(n);
    for (auto& y : labels) y = rng.Bernoulli(0.3);
    labels[0] = 1;
    labels[1] = 0;
    std::vector<double> values(n);
    std::iota(values.begin(), values.end(), 0.0);
    const FeatureMatrix m = MakeMatrix(n, 1, values, labels);
    const double ratio = rng.Uniform(0.5, 1.0);
    const long pos = std::count(labels.begin(), labels.end(), 1);
    if (std::floor(ratio * static_cast<double>(pos) + 1e-9) < 1.0) continue;
    const auto [train, test] = StratifiedSplit(m, SplitSpec{ratio, static_cast<std::uint64_t>(t), true});
    EXPECT_EQ(train.rows + test.rows, n);
    const long train_pos = std::count(train.labels.begin(), train.labels.end(), 1);
    const long test_pos = std::count(test.labels.begin(), test.labels.end(), 1);
    EXPECT_EQ(train_pos + test_pos, pos);
    EXPECT_EQ(train_pos, static_cast<long>(std::floor(ratio * static_cast<double>(pos) + 1e-9)));
    std::vector<double> seen = train.values;
    seen.insert(seen.end(), test.values.begin(), test.values.end());
    std::sort(seen.begin(), seen.end());
    EXPECT_EQ(seen, values);
  }
}

TEST(TreeProperties, LeafCountBoundedAndPredictionPure) {
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const FeatureMatrix m = testing::LatticeMatrix(30 + rng.Below(200), 1 + rng.Below(5), 2 + rng.Below(20), t);
    GrowthParams p;
    p.max_depth = static_cast<int>(rng.Below(8));
    p.min_samples_leaf = 1 + rng.Below(4);
    p.criterion = rng.Bernoulli(0.5) ? Criterion::kGini : Criterion::kVariance;
    const Tree tree = GrowTree(m, testing::Targets(m), p);
    EXPECT_LE(tree.leaf_count(), m.rows);
    EXPECT_LE(tree.depth(), static_cast<std::size_t>(p.max_depth));
    for (std::size_t i = 0; i < m.rows; ++i) EXPECT_EQ(tree.Predict(m.row(i)), tree.Predict(m.row(i)));
  }
}

TEST(BoostingProperties, LosslessHistogramEqualsExactAcrossParams) {
  Rng rng(7);
  for (int t = 0; t < 8; ++t) {
    const FeatureMatrix m = testing::LatticeMatrix(100 + rng.Below(300), 2 + rng.Below(4), 2 + rng.Below(60), t);
    BoostParams p;
    p.rounds = 5 + rng.Below(15);
    p.max_depth = 1 + static_cast<int>(rng.Below(6));
    p.lambda = rng.Uniform(0.0, 3.0);
    p.gamma = rng.Uniform(0.0, 0.5);
    p.learning_rate = rng.Uniform(0.05, 0.5);
    const BoostedModel exact = FitBoosted(m, p);
    p.mode = BoostMode::kHistogram;
    const BoostedModel hist = FitBoosted(m, p);
    for (std::size_t i = 0; i < m.rows; ++i) ASSERT_EQ(exact.PredictRaw(m.row(i)), hist.PredictRaw(m.row(i)));
  }
}

TEST(BoostingProperties, ObjectiveNonIncreasingForSmallLearningRates) {
  Rng rng(8);
  for (int t = 0; t < 4; ++t) {
    const FeatureMatrix m = testing::LatticeMatrix(150, 3, 10, 100 + t);
    BoostParams p;
    p.rounds = 20;
    p.learning_rate = rng.Uniform(0.05, 0.3);
    const BoostedModel model = FitBoosted(m, p);
    const auto y = testing::Targets(m);
    double previous = model.Truncated(0).Objective(m, y);
    for (std::size_t k = 1; k <= p.rounds; ++k) {
      const double current = model.Truncated(k).Objective(m, y);
      EXPECT_LE(current, previous);
      previous = current;
    }
  }
}

TEST(ForestProperties, FixedSeedIsBitIdentical) {
  const auto data = testing::SyntheticHoldout(300, 9);
  ForestParams p;
  p.n_trees = 20;
  p.seed = 99;
  EXPECT_EQ(FitForest(data.train, p).PredictProba(data.test), FitForest(data.train, p).PredictProba(data.test));
}

TEST(VotingProperties, SoftVoteIsConvexAndPermutationInvariant) {
  Rng rng(10);
  const std::vector<double> row = {0.0};
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.Below(6);
    std::vector<std::shared_ptr<const Classifier>> members;
    std::vector<double> scores;
    for (std::size_t j = 0; j < n; ++j) {
      members.push_back(std::make_shared<Fixed>(rng.Uniform()));
      scores.push_back(rng.Bernoulli(0.2) ? 0.0 : rng.Uniform(0.1, 1.0));
    }
    if (std::accumulate(scores.begin(), scores.end(), 0.0) == 0.0) scores[0] = 1.0;
    const auto weights = DeriveWeights(scores);
    const WeightedEnsemble e(members, weights);
    const ClassProba p = e.SoftVote(row);
    EXPECT_GE(p[0], 0.0);
    EXPECT_LE(p[1], 1.0 + 1e-15);
    EXPECT_NEAR(p[0] + p[1], 1.0, 1e-12);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.Shuffle(std::span<std::size_t>(order));
    std::vector<std::shared_ptr<const Classifier>> pm;
    std::vector<double> pw;
    for (std::size_t j : order) {
      pm.push_back(members[j]);
      pw.push_back(weights[j]);
    }
    const WeightedEnsemble permuted(pm, pw);
    EXPECT_NEAR(permuted.SoftVote(row)[1], p[1], 1e-12);
    if (std::abs(p[1] - 0.5) > 1e-9) {
      EXPECT_EQ(permuted.PredictArgmax(row), e.PredictArgmax(row));
      EXPECT_EQ(e.PredictThreshold(row, ThresholdRule{0.5}), e.PredictArgmax(row));
    }
  }
}

TEST(VotingProperties, DeriveWeightsIsScaleInvariant) {
  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> s(1 + rng.Below(6));
    for (double& x : s) x = rng.Uniform(0.01, 1.0);
    const double c = std::exp(rng.Uniform(-6.0, 6.0));
    std::vector<double> scaled(s);
    for (double& x : scaled) x *= c;
    const auto a = DeriveWeights(s);
    const auto b = DeriveWeights(scaled);
    for (std::size_t j = 0; j < s.size(); ++j) EXPECT_NEAR(a[j], b[j], 1e-14);
  }
}

TEST(MetricsProperties, LogLossNonNegativeAndHarmonicF1) {
  Rng rng(12);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng.Below(50);
    std::vector<int> y(n);
    std::vector<int> pred(n);
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<int>(rng.Below(2));
      pred[i] = static_cast<int>(rng.Below(2));
      p[i] = rng.Uniform();
    }
    EXPECT_GE(MeanLogLoss(y, p), 0.0);
    for (Averaging a : {Averaging::kPositiveClass, Averaging::kMacro}) {
      const MetricsReport r = ClassificationReport(ComputeConfusion(y, pred), a);
      for (double v : {r.accuracy, r.precision, r.recall, r.f1}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
      if (r.precision > 0.0 && r.recall > 0.0) {
        EXPECT_NEAR(r.f1, 2.0 * r.precision * r.recall / (r.precision + r.recall), 1e-15);
      }
    }
  }
}

}  // namespace
}  // namespace wve

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

// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
// when any criterion fails.
//
// Usage: wve_acceptance [suite-start-stamp-file]
// The optional file holds the wall-clock time (seconds since the epoch) at
// which the surrounding test suite started; criterion 12 measures from it
// when present and from process start otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "wve/baselines.hpp"
#include "wve/boosting.hpp"
#include "wve/forest.hpp"
#include "wve/metrics.hpp"
#include "wve/model_io.hpp"
#include "wve/pipeline.hpp"
#include "wve/voting.hpp"

namespace {

using namespace wve;
using wve::testing::LatticeMatrix;
using wve::testing::MaxDistinct;
using wve::testing::SyntheticHoldout;
using wve::testing::SyntheticMatrix;
using wve::testing::Targets;

double WallSeconds() {
  return std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count();
}

int failures = 0;

void Report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string Format(const char* fmt, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof(buffer), fmt, args...);
  return buffer;
}

double Accuracy(std::span<const int> truth, std::span<const int> predicted) {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i];
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

struct SeedRun {
  double wve = 0.0;
  std::vector<double> members;
  double seconds = 0.0;
};

SeedRun RunSeed(std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const auto data = SyntheticHoldout(2000, seed);
  RunConfig config;
  config.seed = seed;
  const WveFit fit = FitWveDetailed(data.train, config.ToWveParams());
  SeedRun run;
  std::vector<int> votes;
  for (std::size_t i = 0; i < data.test.rows; ++i) {
    votes.push_back(fit.ensemble->PredictThreshold(data.test.row(i), ThresholdRule{0.5}));
  }
  run.wve = Accuracy(data.test.labels, votes);
  for (const auto& member : fit.ensemble->members()) {
    run.members.push_back(Accuracy(data.test.labels, member->Predict(data.test)));
  }
  run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

// Criteria 1 and 2 share the fitted ensembles for seeds 1..5.
void PlantedRuleAndMembers() {
  std::vector<SeedRun> runs;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) runs.push_back(RunSeed(seed));

  double mean = 0.0;
  double worst = 1.0;
  double slowest = 0.0;
  std::string accs;
  for (std::size_t s = 0; s < 5; ++s) {
    mean += runs[s].wve / 5.0;
    worst = std::min(worst, runs[s].wve);
    slowest = std::max(slowest, runs[s].seconds);
    accs += Format("%.4f ", runs[s].wve);
  }
  Report(1, worst >= 0.88 && mean >= 0.90 && slowest < 60.0,
         Format("accuracies [%s] min %.4f (>= 0.88) mean %.4f (>= 0.90) slowest %.2f s (< 60)",
                accs.c_str(), worst, mean, slowest));

  std::vector<double> margins;
  bool above_worst = true;
  for (const auto& r : runs) {
    const double best = *std::max_element(r.members.begin(), r.members.end());
    const double low = *std::min_element(r.members.begin(), r.members.end());
    margins.push_back(r.wve - best);
    above_worst = above_worst && r.wve >= low;
  }
  std::sort(margins.begin(), margins.end());
  const double median = 0.5 * (margins[4] + margins[5]);
  Report(2, median >= -0.005 && above_worst,
         Format("median(wve - best member) %+.4f (>= -0.005); wve >= worst member on all 10 seeds: %s", median,
                above_worst ? "yes" : "no"));
}

bool SameTrees(const BoostedModel& a, const BoostedModel& b) {
  if (a.trees().size() != b.trees().size() || a.base_score() != b.base_score()) return false;
  for (std::size_t k = 0; k < a.trees().size(); ++k) {
    const auto& x = a.trees()[k].nodes;
    const auto& y = b.trees()[k].nodes;
    if (x.size() != y.size()) return false;
    for (std::size_t n = 0; n < x.size(); ++n) {
      if (x[n].feature != y[n].feature || x[n].threshold != y[n].threshold || x[n].left != y[n].left ||
          x[n].right != y[n].right || x[n].value != y[n].value) {
        return false;
      }
    }
  }
  return true;
}

void HistogramEquivalence() {
  const std::vector<std::pair<std::string, FeatureMatrix>> suite = {
      {"synthetic n=200", SyntheticMatrix(200, 11)},
      {"synthetic n=250", SyntheticMatrix(250, 12)},
      {"lattice 600x6 (40 levels)", LatticeMatrix(600, 6, 40, 13)},
      {"lattice 800x4 (256 levels)", LatticeMatrix(800, 4, 256, 14)},
      {"synthetic n=2000", SyntheticMatrix(2000, 15)},
  };
  std::size_t eligible = 0;
  std::size_t identical = 0;
  for (const auto& [name, m] : suite) {
    if (MaxDistinct(m) > 256) continue;
    ++eligible;
    BoostParams p;
    p.rounds = 30;
    p.mode = BoostMode::kExact;
    const BoostedModel exact = FitBoosted(m, p);
    p.mode = BoostMode::kHistogram;
    const BoostedModel hist = FitBoosted(m, p);
    bool same = SameTrees(exact, hist);
    for (std::size_t i = 0; same && i < m.rows; ++i) same = exact.PredictRaw(m.row(i)) == hist.PredictRaw(m.row(i));
    identical += same;
  }
  Report(3, eligible >= 3 && identical == eligible,
         Format("%zu of %zu eligible datasets bit-identical (%zu in suite)", identical, eligible, suite.size()));
}

void GradientCorrectness() {
  Rng rng(404);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Loss loss = t % 2 == 0 ? Loss::kLogLoss : Loss::kSquaredError;
    const double u = loss == Loss::kLogLoss ? static_cast<double>(rng.Below(2)) : rng.Uniform(-3.0, 3.0);
    const double s = rng.Uniform(-4.0, 4.0);
    // Squared error is differentiated in its half form, so h = 1.
    auto f = [&](double raw) {
      if (loss == Loss::kLogLoss) return LossValue(loss, u, Logistic(raw));
      return 0.5 * LossValue(loss, u, raw);
    };
    const double step = 1e-4;
    const double g_fd = (f(s + step) - f(s - step)) / (2.0 * step);
    const double h_fd = (f(s + step) - 2.0 * f(s) + f(s - step)) / (step * step);
    const GradHess gh = ComputeGradHess(loss, u, s);
    const double rel_g = std::abs(gh.g - g_fd) / std::max(std::abs(g_fd), 1e-3);
    const double rel_h = std::abs(gh.h - h_fd) / std::max(std::abs(h_fd), 1e-3);
    worst = std::max({worst, rel_g, rel_h});
  }
  Report(4, worst <= 1e-4, Format("max relative error %.3e over 100 points (<= 1e-4)", worst));
}

void LeafWeightOptimality() {
  Rng rng(505);
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 50; ++t) {
    const double g = rng.Uniform(-20.0, 20.0);
    const double h = rng.Uniform(0.0, 10.0);
    const double lambda = rng.Uniform(0.5, 5.0);
    auto objective = [&](double w) { return g * w + 0.5 * (h + lambda) * w * w; };
    const double best = objective(LeafWeight(g, h, lambda));
    for (long k = -100000; k <= 100000; ++k) {
      worst_margin = std::min(worst_margin, objective(static_cast<double>(k) * 1e-4) - best);
    }
  }
  Report(5, worst_margin >= -1e-9,
         Format("min (scan objective - closed form objective) %.3e over 50 triples (>= -1e-9)", worst_margin));
}

void ObjectiveMonotonicity() {
  const std::vector<FeatureMatrix> suite = {SyntheticMatrix(200, 21), LatticeMatrix(400, 5, 30, 22),
                                            SyntheticMatrix(500, 23, 0.2)};
  std::size_t monotone = 0;
  double worst_rise = 0.0;
  for (const auto& m : suite) {
    BoostParams p;
    p.rounds = 50;
    p.learning_rate = 0.1;
    const BoostedModel model = FitBoosted(m, p);
    const auto targets = Targets(m);
    double previous = model.Truncated(0).Objective(m, targets);
    bool ok = true;
    for (std::size_t k = 1; k <= p.rounds; ++k) {
      const double current = model.Truncated(k).Objective(m, targets);
      worst_rise = std::max(worst_rise, current - previous);
      ok = ok && current <= previous;
      previous = current;
    }
    monotone += ok;
  }
  Report(6, monotone == suite.size(),
         Format("%zu of %zu datasets non-increasing over 50 rounds (largest rise %.3e)", monotone, suite.size(),
                worst_rise));
}

class FixedMember final : public Classifier {
 public:
  explicit FixedMember(double p) : p_(p) {}
  ModelKind kind() const override { return ModelKind::kLogistic; }
  std::size_t width() const override { return 1; }
  ClassProba PredictProba(std::span<const double>) const override { return {1.0 - p_, p_}; }

 private:
  double p_;
};

void VotingAlgebra() {
  Rng rng(707);
  std::size_t argmax_ok = 0;
  std::size_t weights_ok = 0;
  std::size_t scale_ok = 0;
  const double row[1] = {0.0};
  for (int t = 0; t < 1000; ++t) {
    const std::size_t members = 1 + rng.Below(5);
    std::vector<std::shared_ptr<const Classifier>> models;
    std::vector<double> probs;
    std::vector<double> scores;
    for (std::size_t j = 0; j < members; ++j) {
      probs.push_back(rng.Uniform());
      models.push_back(std::make_shared<FixedMember>(probs.back()));
      scores.push_back(rng.Uniform(0.01, 1.0));
    }
    const auto weights = DeriveWeights(scores);
    double sum = 0.0;
    bool nonnegative = true;
    for (double w : weights) {
      sum += w;
      nonnegative = nonnegative && w >= 0.0;
    }
    weights_ok += nonnegative && std::abs(sum - 1.0) <= 1e-12;

    const WeightedEnsemble ensemble(models, weights);
    double pos = 0.0;
    double neg = 0.0;
    for (std::size_t j = 0; j < members; ++j) {
      pos += weights[j] * probs[j];
      neg += weights[j] * (1.0 - probs[j]);
    }
    const int oracle = pos > neg ? 1 : 0;
    argmax_ok += ensemble.PredictArgmax(row) == oracle && ArgmaxClass(ensemble.SoftVote(row)) == oracle;

    const double c = std::exp(rng.Uniform(-5.0, 5.0));
    std::vector<double> scaled(scores);
    for (double& s : scaled) s *= c;
    const WeightedEnsemble rescaled(models, DeriveWeights(scaled));
    double raw_pos = 0.0;
    double raw_neg = 0.0;
    for (std::size_t j = 0; j < members; ++j) {
      raw_pos += scaled[j] * probs[j];
      raw_neg += scaled[j] * (1.0 - probs[j]);
    }
    scale_ok += rescaled.PredictArgmax(row) == ensemble.PredictArgmax(row) &&
                (raw_pos > raw_neg ? 1 : 0) == ensemble.PredictArgmax(row);
  }
  Report(7, argmax_ok == 1000 && weights_ok == 1000 && scale_ok == 1000,
         Format("argmax %zu/1000, weight constraints %zu/1000, scale invariance %zu/1000", argmax_ok, weights_ok,
                scale_ok));
}

void MetricsOracle() {
  Rng rng(808);
  std::size_t exact = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.Below(200);
    std::vector<int> truth(n);
    std::vector<int> pred(n);
    for (std::size_t i = 0; i < n; ++i) {
      truth[i] = static_cast<int>(rng.Below(2));
      pred[i] = static_cast<int>(rng.Below(2));
    }
    std::size_t counts[2][2] = {{0, 0}, {0, 0}};
    for (std::size_t i = 0; i < n; ++i) ++counts[truth[i]][pred[i]];
    auto div = [](std::size_t a, std::size_t b) { return b == 0 ? 0.0 : double(a) / double(b); };
    auto hm = [](double a, double b) { return a + b == 0.0 ? 0.0 : 2.0 * a * b / (a + b); };
    const double prec[2] = {div(counts[0][0], counts[0][0] + counts[1][0]),
                            div(counts[1][1], counts[1][1] + counts[0][1])};
    const double rec[2] = {div(counts[0][0], counts[0][0] + counts[0][1]),
                           div(counts[1][1], counts[1][1] + counts[1][0])};
    const double acc = div(counts[0][0] + counts[1][1], n);

    const ConfusionMatrix cm = ComputeConfusion(truth, pred);
    const MetricsReport pos = ClassificationReport(cm, Averaging::kPositiveClass);
    const MetricsReport mac = ClassificationReport(cm, Averaging::kMacro);
    const double mp = 0.5 * (prec[1] + prec[0]);
    const double mr = 0.5 * (rec[1] + rec[0]);
    exact += cm.tp == counts[1][1] && cm.fp == counts[0][1] && cm.fn == counts[1][0] && cm.tn == counts[0][0] &&
             pos.accuracy == acc && pos.precision == prec[1] && pos.recall == rec[1] &&
             pos.f1 == hm(prec[1], rec[1]) && mac.accuracy == acc && mac.precision == mp && mac.recall == mr &&
             mac.f1 == hm(mp, mr);
  }
  std::vector<int> labels(1000);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 3 == 0);
  const std::vector<double> half(labels.size(), 0.5);
  const double gap = std::abs(MeanLogLoss(labels, half) - std::log(2.0));
  Report(8, exact == 1000 && gap <= 1e-12,
         Format("%zu/1000 reports match brute-force recount; |log loss(0.5) - ln 2| = %.2e (<= 1e-12)", exact, gap));
}

void SplitArithmetic() {
  std::vector<int> labels;
  for (int i = 0; i < 261; ++i) labels.push_back(i % 3 == 0 ? 1 : 0);
  const FeatureMatrix m = MakeMatrix(labels.size(), 1, std::vector<double>(labels.size(), 0.0), labels);
  const auto [train, test] = StratifiedSplit(m, SplitSpec{0.8, 9, true});
  auto positives = [](const FeatureMatrix& x) {
    return static_cast<std::size_t>(std::count(x.labels.begin(), x.labels.end(), 1));
  };
  const std::size_t tp = positives(train);
  const std::size_t sp = positives(test);
  const std::size_t tn = train.rows - tp;
  const std::size_t sn = test.rows - sp;
  Report(9, tp == 69 && tn == 139 && sp == 18 && sn == 35,
         Format("positives 87, negatives 174 -> train (%zu, %zu) test (%zu, %zu); expected (69, 139) (18, 35)", tp, tn,
                sp, sn));
}

void RoundTrip() {
  const auto data = SyntheticHoldout(600, 31);
  BoostParams exact;
  exact.rounds = 40;
  BoostParams hist = exact;
  hist.mode = BoostMode::kHistogram;
  hist.max_bins = 32;
  ForestParams forest;
  forest.n_trees = 30;
  forest.seed = 31;
  WveParams wve;
  wve.forest = forest;
  wve.boost = exact;
  wve.cv.seed = 31;

  const std::vector<std::pair<std::string, std::function<std::shared_ptr<const Classifier>()>>> fits = {
      {"wve", [&] { return FitWveDetailed(data.train, wve).ensemble; }},
      {"forest", [&] { return std::make_shared<Forest>(FitForest(data.train, forest)); }},
      {"boost-exact", [&] { return std::make_shared<BoostedModel>(FitBoosted(data.train, exact)); }},
      {"boost-histogram", [&] { return std::make_shared<BoostedModel>(FitBoosted(data.train, hist)); }},
      {"logistic", [&] { return std::make_shared<LinearModel>(FitLogistic(data.train)); }},
      {"svm", [&] { return std::make_shared<LinearModel>(FitLinearSvm(data.train)); }},
      {"knn", [&] { return std::make_shared<KnnModel>(FitKnn(data.train)); }},
      {"naive-bayes", [&] { return std::make_shared<GaussianNbModel>(FitGaussianNb(data.train)); }},
      {"tree", [&] { return std::make_shared<DecisionTreeModel>(FitBaselineTree(data.train)); }},
  };
  const auto path = std::filesystem::temp_directory_path() / "wve_acceptance_roundtrip.json";
  std::size_t preserved = 0;
  std::string broken;
  for (const auto& [name, fit] : fits) {
    ModelDocument doc;
    doc.model = fit();
    doc.schema = data.train.Fingerprint();
    SaveModel(doc, path);
    const ModelDocument loaded = LoadModel(path);
    bool same = loaded.model->kind() == doc.model->kind();
    for (std::size_t i = 0; same && i < 100; ++i) {
      const auto a = doc.model->PredictProba(data.test.row(i));
      const auto b = loaded.model->PredictProba(data.test.row(i));
      same = std::memcmp(a.data(), b.data(), sizeof(a)) == 0 &&
             doc.model->Predict(data.test.row(i)) == loaded.model->Predict(data.test.row(i));
    }
    if (same) {
      ++preserved;
    } else {
      broken += name + " ";
    }
  }
  std::filesystem::remove(path);
  Report(10, preserved == fits.size(),
         Format("%zu/%zu model kinds bit-identical on 100 probe rows %s", preserved, fits.size(), broken.c_str()));
}

void BenchmarkShape() {
  SynthSpec spec;
  spec.seed = 41;
  const std::string csv = SerializeTable(GenerateSynthetic(spec));
  RunConfig config;
  config.seed = 41;
  const BenchmarkReport report = RunBenchmark(csv, config, true);
  const auto doc = report.ToJson(config.averaging);
  bool columns = doc["models"].size() == 8;
  double min_baseline = 1.0;
  double wve = 0.0;
  for (const auto& row : doc["models"]) {
    for (const char* key : {"precision", "recall", "f1", "accuracy"}) columns = columns && row.contains(key);
    if (!row.contains("accuracy")) continue;
    if (row["name"] == "Weighted Voting Ensemble") {
      wve = row["accuracy"];
    } else {
      min_baseline = std::min(min_baseline, row["accuracy"].get<double>());
    }
  }
  const double ratio = report.scaling ? report.scaling->ratio : 0.0;
  Report(11, report.rows.size() == 8 && columns && ratio >= 1.4 && ratio <= 3.0 && wve >= min_baseline,
         Format("%zu rows, metric columns %s, wve accuracy %.4f vs min baseline %.4f, "
                "forest time ratio t->2t %.3f (in [1.4, 3.0])",
                report.rows.size(), columns ? "complete" : "missing", wve, min_baseline, ratio));
}

double SuiteStart(int argc, char** argv, double fallback) {
  if (argc < 2) return fallback;
  std::ifstream in(argv[1]);
  double start = 0.0;
  if (in >> start) return start;
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  const double process_start = WallSeconds();
  try {
    PlantedRuleAndMembers();
    HistogramEquivalence();
    GradientCorrectness();
    LeafWeightOptimality();
    ObjectiveMonotonicity();
    VotingAlgebra();
    MetricsOracle();
    SplitArithmetic();
    RoundTrip();
    BenchmarkShape();
  } catch (const std::exception& e) {
    std::printf("aborted: %s\n", e.what());
    return 1;
  }
  const double elapsed = WallSeconds() - SuiteStart(argc, argv, process_start);
  Report(12, elapsed < 300.0, Format("suite elapsed %.1f s (< 300)", elapsed));
  std::printf("%s: %d criteria failed\n", failures == 0 ? "PASS" : "FAIL", failures);
  return failures == 0 ? 0 : 1;
}

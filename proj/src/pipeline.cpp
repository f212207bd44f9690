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

#include "wve/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>
#include <utility>

#include "wve/baselines.hpp"
#include "wve/boosting.hpp"
#include "wve/error.hpp"
#include "wve/forest.hpp"

namespace wve {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

std::string Fixed(double v, int digits = 4) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, v);
  return buffer;
}

json MetricsJson(const MetricsReport& r) {
  return {{"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1}, {"accuracy", r.accuracy}};
}

EvaluationSummary Summarize(std::span<const int> truth, std::span<const int> predicted,
                            std::span<const double> proba) {
  EvaluationSummary s;
  s.rows = truth.size();
  s.confusion = ComputeConfusion(truth, predicted);
  s.mean_log_loss = MeanLogLoss(truth, proba);
  s.macro = ClassificationReport(s.confusion, Averaging::kMacro);
  s.positive = ClassificationReport(s.confusion, Averaging::kPositiveClass);
  s.macro.mean_log_loss = s.mean_log_loss;
  s.positive.mean_log_loss = s.mean_log_loss;
  return s;
}

const std::vector<std::string> kMemberNames = {"random_forest", "boosting_exact", "boosting_histogram"};

}  // namespace

WveParams RunConfig::ToWveParams() const {
  WveParams p;
  p.forest.n_trees = trees;
  p.forest.seed = seed;
  p.boost.rounds = rounds;
  p.boost.learning_rate = learning_rate;
  p.boost.gamma = gamma;
  p.boost.lambda = lambda;
  p.boost.max_depth = max_depth;
  p.boost.max_bins = max_bins;
  p.boost.seed = seed;
  p.cv.folds = folds;
  p.cv.seed = seed;
  return p;
}

SplitSpec RunConfig::ToSplitSpec() const { return {ratio, seed, true}; }

json RunConfig::ToJson() const {
  return {{"seed", seed},
          {"ratio", ratio},
          {"threshold", threshold},
          {"folds", folds},
          {"trees", trees},
          {"rounds", rounds},
          {"learning_rate", learning_rate},
          {"gamma", gamma},
          {"lambda", lambda},
          {"max_depth", max_depth},
          {"max_bins", max_bins},
          {"averaging", AveragingName(averaging)},
          {"clean_policy", clean_policy == CleanPolicy::kDrop ? "drop" : "impute"}};
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kFileNotFound, "file not found: '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "failed writing '" + path.string() + "'");
}

PreparedData PrepareData(std::string_view csv, const RunConfig& config) {
  const RawTable raw = ParseTable(csv, StrokeSchema());
  auto [clean, report] = CleanTable(raw, config.clean_policy);
  const FeatureMatrix all = EncodeRecords(clean);
  auto [train, test] = StratifiedSplit(all, config.ToSplitSpec());
  return {std::move(report), std::move(train), std::move(test)};
}

json EvaluationSummary::ToJson() const {
  return {{"rows", rows},
          {"confusion", {{"tp", confusion.tp}, {"fp", confusion.fp}, {"fn", confusion.fn}, {"tn", confusion.tn}}},
          {"macro", MetricsJson(macro)},
          {"positive", MetricsJson(positive)},
          {"mean_log_loss", mean_log_loss}};
}

EvaluationSummary EvaluateThreshold(const Classifier& model, const FeatureMatrix& m, double threshold) {
  const ThresholdRule rule{threshold};
  rule.Validate();
  const auto* ensemble = dynamic_cast<const WeightedEnsemble*>(&model);
  std::vector<int> predicted;
  std::vector<double> proba;
  for (std::size_t i = 0; i < m.rows; ++i) {
    const double p = ensemble ? ensemble->WeightedPositiveScore(m.row(i)) : model.PredictProba(m.row(i))[1];
    proba.push_back(p);
    predicted.push_back(p >= rule.threshold ? 1 : 0);
  }
  return Summarize(m.labels, predicted, proba);
}

EvaluationSummary EvaluateArgmax(const Classifier& model, const FeatureMatrix& m) {
  return Summarize(m.labels, model.Predict(m), model.PredictPositive(m));
}

std::string TrainOutcome::ReportText(Averaging primary) const {
  std::ostringstream out;
  out << "# training report\n";
  out << clean.ToKeyValueText();
  out << "train_rows = " << train_rows << '\n';
  out << "test_rows = " << test_rows << '\n';
  const auto* ensemble = dynamic_cast<const WeightedEnsemble*>(document.model.get());
  for (std::size_t j = 0; j < cv_scores.size(); ++j) {
    out << "member." << kMemberNames[j] << ".cv_score = " << Fixed(cv_scores[j], 6) << '\n';
    if (ensemble) out << "member." << kMemberNames[j] << ".weight = " << Fixed(ensemble->weights()[j], 6) << '\n';
  }
  out << "confusion.tp = " << test.confusion.tp << '\n';
  out << "confusion.fp = " << test.confusion.fp << '\n';
  out << "confusion.fn = " << test.confusion.fn << '\n';
  out << "confusion.tn = " << test.confusion.tn << '\n';
  const Averaging secondary = primary == Averaging::kMacro ? Averaging::kPositiveClass : Averaging::kMacro;
  out << "# primary metrics\n" << test.Primary(primary).ToKeyValueText();
  out << "# secondary metrics\n" << test.Primary(secondary).ToKeyValueText();
  return out.str();
}

json TrainOutcome::ReportJson() const {
  json members = json::array();
  const auto* ensemble = dynamic_cast<const WeightedEnsemble*>(document.model.get());
  for (std::size_t j = 0; j < cv_scores.size(); ++j) {
    members.push_back({{"name", kMemberNames[j]},
                       {"cv_score", cv_scores[j]},
                       {"weight", ensemble ? ensemble->weights()[j] : 0.0}});
  }
  json drops = json::object();
  for (const auto& [k, v] : clean.drop_tallies) drops[k] = v;
  json imputes = json::object();
  for (const auto& [k, v] : clean.imputation_tallies) imputes[k] = v;
  return {{"clean",
           {{"input_count", clean.input_count},
            {"retained_count", clean.retained_count},
            {"dropped_count", clean.dropped_count},
            {"drop_tallies", drops},
            {"imputation_tallies", imputes}}},
          {"train_rows", train_rows},
          {"test_rows", test_rows},
          {"members", members},
          {"test", test.ToJson()}};
}

TrainOutcome RunTrain(std::string_view csv, const RunConfig& config) {
  PreparedData data = PrepareData(csv, config);
  const WveFit fit = FitWveDetailed(data.train, config.ToWveParams());

  TrainOutcome outcome;
  outcome.clean = data.clean;
  outcome.cv_scores = fit.cv_scores;
  outcome.train_rows = data.train.rows;
  outcome.test_rows = data.test.rows;
  outcome.document.model = fit.ensemble;
  outcome.document.schema = data.train.Fingerprint();
  outcome.document.metadata = {{"config", config.ToJson()}, {"members", kMemberNames}};
  if (data.test.rows > 0) outcome.test = EvaluateThreshold(*fit.ensemble, data.test, config.threshold);
  return outcome;
}

void CheckSchema(const ModelDocument& doc, const FeatureMatrix& m) {
  if (doc.schema != m.Fingerprint()) {
    throw Error(ErrorKind::kSchemaViolation, "input encoding does not match the model's schema fingerprint");
  }
}

EvaluationSummary RunEvaluate(const ModelDocument& doc, std::string_view csv, const RunConfig& config) {
  const RawTable raw = ParseTable(csv, StrokeSchema());
  const auto [clean, report] = CleanTable(raw, config.clean_policy);
  const FeatureMatrix m = EncodeRecords(clean);
  CheckSchema(doc, m);
  return EvaluateThreshold(*doc.model, m, config.threshold);
}

std::vector<PredictionRow> RunPredict(const ModelDocument& doc, std::string_view csv, double threshold) {
  const ThresholdRule rule{threshold};
  rule.Validate();
  RawTable raw;
  try {
    raw = ParseTable(csv, StrokeSchema(), TargetColumn::kOptional);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kUnknownColumn) throw;
    throw Error(ErrorKind::kSchemaViolation, std::string("input does not match the model schema: ") + e.what());
  }
  const FeatureMatrix m = EncodeRecords(raw);
  if (m.rows > 0) CheckSchema(doc, m);
  const auto* ensemble = dynamic_cast<const WeightedEnsemble*>(doc.model.get());

  std::vector<PredictionRow> rows;
  rows.reserve(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    PredictionRow r;
    r.index = i;
    r.proba = ensemble ? ensemble->WeightedPositiveScore(m.row(i)) : doc.model->PredictProba(m.row(i))[1];
    r.label = r.proba >= rule.threshold ? 1 : 0;
    r.bmi_band = ClassifyBmi(std::get<double>(raw.rows[i][stroke::kBmi]));
    r.glucose_band = ClassifyGlucose(std::get<double>(raw.rows[i][stroke::kGlucose]));
    rows.push_back(r);
  }
  return rows;
}

std::string FormatPredictions(const std::vector<PredictionRow>& rows) {
  std::ostringstream out;
  out << "row,class,proba,bmi_band,glucose_band\n";
  for (const auto& r : rows) {
    out << r.index << ',' << r.label << ',' << Fixed(r.proba, 6) << ',' << BmiBandName(r.bmi_band) << ','
        << GlucoseBandName(r.glucose_band) << '\n';
  }
  return out.str();
}

ScalingMeasurement MeasureForestScaling(const FeatureMatrix& m, ForestParams params, std::size_t repeats) {
  Require(repeats >= 1, ErrorKind::kInvalidArgument, "repeats must be >= 1");
  auto best_time = [&](std::size_t trees) {
    ForestParams p = params;
    p.n_trees = trees;
    double best = 0.0;
    for (std::size_t r = 0; r < repeats; ++r) {
      const auto start = Clock::now();
      const Forest f = FitForest(m, p);
      const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
      if (r == 0 || seconds < best) best = seconds;
    }
    return best;
  };
  ScalingMeasurement s;
  s.base_trees = params.n_trees;
  s.base_seconds = best_time(params.n_trees);
  s.doubled_seconds = best_time(2 * params.n_trees);
  s.ratio = s.base_seconds > 0.0 ? s.doubled_seconds / s.base_seconds : 0.0;
  return s;
}

BenchmarkReport RunBenchmark(std::string_view csv, const RunConfig& config, bool measure_scaling) {
  PreparedData data = PrepareData(csv, config);
  const FeatureMatrix& train = data.train;

  const WveParams wve = config.ToWveParams();
  using Fit = std::function<std::shared_ptr<const Classifier>()>;
  const std::vector<std::pair<std::string, Fit>> entries = {
      {"Logistic Regression", [&] { return std::make_shared<LinearModel>(FitLogistic(train)); }},
      {"Support Vector Machines", [&] { return std::make_shared<LinearModel>(FitLinearSvm(train)); }},
      {"Decision Tree", [&] { return std::make_shared<DecisionTreeModel>(FitBaselineTree(train)); }},
      {"Random Forest", [&] { return std::make_shared<Forest>(FitForest(train, wve.forest)); }},
      {"Gradient tree Boosting", [&] { return std::make_shared<BoostedModel>(FitBaselineBoosting(train)); }},
      {"K-Nearest Neighbor", [&] { return std::make_shared<KnnModel>(FitKnn(train)); }},
      {"Naive Bayes", [&] { return std::make_shared<GaussianNbModel>(FitGaussianNb(train)); }},
      {"Weighted Voting Ensemble", [&] { return FitWveDetailed(train, wve).ensemble; }},
  };

  BenchmarkReport report;
  for (const auto& [name, fit] : entries) {
    BenchmarkRow row;
    row.name = name;
    try {
      const auto start = Clock::now();
      row.model = fit();
      row.fit_seconds = std::chrono::duration<double>(Clock::now() - start).count();
      row.summary = EvaluateArgmax(*row.model, data.test);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  if (measure_scaling) report.scaling = MeasureForestScaling(train, wve.forest);
  report.environment = "hardware_threads=" + std::to_string(std::thread::hardware_concurrency()) +
                       "; train_rows=" + std::to_string(train.rows) +
                       "; test_rows=" + std::to_string(data.test.rows) +
                       "; features=" + std::to_string(train.cols) + "; fit timing is wall-clock";
  report.test = std::move(data.test);
  return report;
}

std::string BenchmarkReport::ToTable(Averaging primary) const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-26s %9s %9s %9s %9s %10s\n", "Model", "Precision", "Recall",
                "F1-Score", "Accuracy", "Fit(s)");
  out << line;
  for (const auto& row : rows) {
    if (row.summary) {
      const auto& m = row.summary->Primary(primary);
      std::snprintf(line, sizeof(line), "%-26s %9.4f %9.4f %9.4f %9.4f %10.3f\n", row.name.c_str(), m.precision,
                    m.recall, m.f1, m.accuracy, row.fit_seconds);
    } else {
      std::snprintf(line, sizeof(line), "%-26s failed: %s\n", row.name.c_str(), row.error.value_or("").c_str());
    }
    out << line;
  }
  out << "averaging: " << AveragingName(primary) << '\n';
  if (scaling) {
    out << "forest scaling: " << scaling->base_trees << " trees " << Fixed(scaling->base_seconds, 3) << " s, "
        << 2 * scaling->base_trees << " trees " << Fixed(scaling->doubled_seconds, 3) << " s, ratio "
        << Fixed(scaling->ratio, 3) << '\n';
  }
  out << "environment: " << environment << '\n';
  return out.str();
}

json BenchmarkReport::ToJson(Averaging primary) const {
  json models = json::array();
  for (const auto& row : rows) {
    json entry = {{"name", row.name}, {"fit_seconds", std::round(row.fit_seconds * 1000.0) / 1000.0}};
    if (row.summary) {
      const auto& m = row.summary->Primary(primary);
      entry["precision"] = m.precision;
      entry["recall"] = m.recall;
      entry["f1"] = m.f1;
      entry["accuracy"] = m.accuracy;
      entry["detail"] = row.summary->ToJson();
    } else {
      entry["error"] = row.error.value_or("");
    }
    models.push_back(std::move(entry));
  }
  json out = {{"averaging", AveragingName(primary)}, {"models", models}, {"environment", environment}};
  if (scaling) {
    out["scaling"] = {{"base_trees", scaling->base_trees},
                      {"base_seconds", scaling->base_seconds},
                      {"doubled_seconds", scaling->doubled_seconds},
                      {"ratio", scaling->ratio}};
  }
  return out;
}

}  // namespace wve

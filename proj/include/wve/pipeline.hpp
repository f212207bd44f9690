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
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wve/classifier.hpp"
#include "wve/metrics.hpp"
#include "wve/model_io.hpp"
#include "wve/tabular.hpp"
#include "wve/voting.hpp"

namespace wve {

// Settings shared by the command-line subcommands. Defaults: forest of
// 100 trees; 100 boosting rounds at learning rate 0.1, gamma 0, lambda 1,
// depth 6, 256 bins; 5 folds; threshold 0.5; macro averaging.
struct RunConfig {
  std::string data_path;
  std::string model_path;
  std::string out_path;
  std::uint64_t seed = 42;
  double ratio = 0.8;
  double threshold = 0.5;
  std::size_t folds = 5;
  std::size_t trees = 100;
  std::size_t rounds = 100;
  double learning_rate = 0.1;
  double gamma = 0.0;
  double lambda = 1.0;
  int max_depth = 6;
  std::size_t max_bins = 256;
  Averaging averaging = Averaging::kMacro;
  CleanPolicy clean_policy = CleanPolicy::kDrop;

  WveParams ToWveParams() const;
  SplitSpec ToSplitSpec() const;
  nlohmann::json ToJson() const;
};

// Throws FileNotFound when the file cannot be opened.
std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

struct PreparedData {
  CleanReport clean;
  FeatureMatrix train;
  FeatureMatrix test;
};

// parse -> clean -> encode -> stratified split.
PreparedData PrepareData(std::string_view csv, const RunConfig& config);

struct EvaluationSummary {
  ConfusionMatrix confusion;
  MetricsReport macro;
  MetricsReport positive;
  double mean_log_loss = 0.0;
  std::size_t rows = 0;

  const MetricsReport& Primary(Averaging a) const { return a == Averaging::kMacro ? macro : positive; }
  nlohmann::json ToJson() const;
};

// Decides each row by (positive score >= threshold); the score is the
// weighted positive probability for ensembles and P(class 1) otherwise.
EvaluationSummary EvaluateThreshold(const Classifier& model, const FeatureMatrix& m, double threshold);
// Decides each row by the model's own Predict (argmax contract).
EvaluationSummary EvaluateArgmax(const Classifier& model, const FeatureMatrix& m);

struct TrainOutcome {
  ModelDocument document;
  CleanReport clean;
  std::vector<double> cv_scores;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  EvaluationSummary test;

  std::string ReportText(Averaging primary) const;
  nlohmann::json ReportJson() const;
};

TrainOutcome RunTrain(std::string_view csv, const RunConfig& config);

// Throws SchemaViolation when the matrix encoding differs from the model's.
void CheckSchema(const ModelDocument& doc, const FeatureMatrix& m);

EvaluationSummary RunEvaluate(const ModelDocument& doc, std::string_view csv, const RunConfig& config);

struct PredictionRow {
  std::size_t index = 0;
  int label = 0;
  double proba = 0.0;
  BmiBand bmi_band = BmiBand::kNormal;
  GlucoseBand glucose_band = GlucoseBand::kNormal;
};

// Target column optional in the input.
std::vector<PredictionRow> RunPredict(const ModelDocument& doc, std::string_view csv, double threshold);
std::string FormatPredictions(const std::vector<PredictionRow>& rows);

struct BenchmarkRow {
  std::string name;
  std::optional<EvaluationSummary> summary;
  double fit_seconds = 0.0;
  std::optional<std::string> error;
  std::shared_ptr<const Classifier> model;
};

struct ScalingMeasurement {
  std::size_t base_trees = 0;
  double base_seconds = 0.0;
  double doubled_seconds = 0.0;
  double ratio = 0.0;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
  std::optional<ScalingMeasurement> scaling;
  std::string environment;
  FeatureMatrix test;

  std::string ToTable(Averaging primary) const;
  nlohmann::json ToJson(Averaging primary) const;
};

// Forest fit wall time at `trees` and 2 * `trees`, best of `repeats` each.
ScalingMeasurement MeasureForestScaling(const FeatureMatrix& m, ForestParams params,
                                        std::size_t repeats = 3);

// Fits the seven baselines and the ensemble on one split; failures are
// recorded per row.
BenchmarkReport RunBenchmark(std::string_view csv, const RunConfig& config, bool measure_scaling);

}  // namespace wve

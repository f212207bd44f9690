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

// Command-line front end: train, evaluate, predict, benchmark, synth.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 model or schema
// error. Every failure prints one diagnostic line to stderr.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wve/error.hpp"
#include "wve/model_io.hpp"
#include "wve/pipeline.hpp"
#include "wve/tabular.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitModel = 4;

int ExitCodeFor(wve::ErrorKind kind) {
  using wve::ErrorKind;
  switch (kind) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kBadK:
      return kExitUsage;
    case ErrorKind::kUnknownColumn:
    case ErrorKind::kWidthMismatch:
    case ErrorKind::kTaskMismatch:
    case ErrorKind::kSchemaViolation:
    case ErrorKind::kVersionMismatch:
      return kExitModel;
    default:
      return kExitData;
  }
}

struct SynthOptions {
  std::size_t n = 2000;
  double noise = 0.1;
  double positive_rate = 1.0 / 3.0;
};

void RequirePath(const std::string& path, const char* flag) {
  if (path.empty()) throw CLI::RequiredError(flag);
}

void Emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    wve::WriteTextFile(path, text);
  }
}

int Train(const wve::RunConfig& config) {
  RequirePath(config.data_path, "--data");
  RequirePath(config.model_path, "--model");
  const wve::TrainOutcome outcome = wve::RunTrain(wve::ReadTextFile(config.data_path), config);
  wve::SaveModel(outcome.document, config.model_path);
  std::cout << outcome.ReportText(config.averaging);
  if (!config.out_path.empty()) wve::WriteTextFile(config.out_path, outcome.ReportJson().dump(2) + "\n");
  return 0;
}

int Evaluate(const wve::RunConfig& config) {
  RequirePath(config.data_path, "--data");
  RequirePath(config.model_path, "--model");
  const wve::ModelDocument doc = wve::LoadModel(config.model_path);
  const wve::EvaluationSummary summary = wve::RunEvaluate(doc, wve::ReadTextFile(config.data_path), config);
  std::cout << "rows = " << summary.rows << '\n' << summary.Primary(config.averaging).ToKeyValueText();
  if (!config.out_path.empty()) wve::WriteTextFile(config.out_path, summary.ToJson().dump(2) + "\n");
  return 0;
}

int Predict(const wve::RunConfig& config) {
  RequirePath(config.data_path, "--data");
  RequirePath(config.model_path, "--model");
  const wve::ModelDocument doc = wve::LoadModel(config.model_path);
  const auto rows = wve::RunPredict(doc, wve::ReadTextFile(config.data_path), config.threshold);
  Emit(config.out_path, wve::FormatPredictions(rows));
  return 0;
}

int Benchmark(const wve::RunConfig& config, bool scaling) {
  RequirePath(config.data_path, "--data");
  const wve::BenchmarkReport report = wve::RunBenchmark(wve::ReadTextFile(config.data_path), config, scaling);
  std::cout << report.ToTable(config.averaging);
  if (!config.out_path.empty()) wve::WriteTextFile(config.out_path, report.ToJson(config.averaging).dump(2) + "\n");
  return 0;
}

int Synth(const wve::RunConfig& config, const SynthOptions& options) {
  RequirePath(config.out_path, "--out");
  wve::SynthSpec spec;
  spec.n = options.n;
  spec.seed = config.seed;
  spec.noise_rate = options.noise;
  spec.positive_rate = options.positive_rate;
  wve::WriteTextFile(config.out_path, wve::SerializeTable(wve::GenerateSynthetic(spec)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted voting ensemble for stroke risk prediction"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key = value file; flags given on the command line take precedence");

  wve::RunConfig config;
  SynthOptions synth;
  std::string averaging = "macro";
  std::string clean = "drop";
  bool scaling = false;

  app.add_option("--data", config.data_path, "Input CSV");
  app.add_option("--model", config.model_path, "Model document path");
  app.add_option("--out", config.out_path, "Output path");
  app.add_option("--seed", config.seed, "Random seed")->capture_default_str();
  app.add_option("--ratio", config.ratio, "Training fraction of the split")->capture_default_str();
  app.add_option("--threshold", config.threshold, "Decision threshold on the positive score")
      ->capture_default_str()->check(CLI::Range(0.0, 1.0));
  app.add_option("--folds", config.folds, "Cross-validation folds")->capture_default_str();
  app.add_option("--trees", config.trees, "Forest size")->capture_default_str();
  app.add_option("--rounds", config.rounds, "Boosting rounds")->capture_default_str();
  app.add_option("--learning-rate", config.learning_rate, "Boosting shrinkage")->capture_default_str();
  app.add_option("--gamma", config.gamma, "Per-leaf penalty")->capture_default_str();
  app.add_option("--lambda", config.lambda, "L2 penalty on leaf weights")->capture_default_str();
  app.add_option("--max-depth", config.max_depth, "Boosted tree depth")->capture_default_str();
  app.add_option("--max-bins", config.max_bins, "Histogram bins per feature")->capture_default_str();
  app.add_option("--averaging", averaging, "Primary metric averaging")
      ->capture_default_str()->check(CLI::IsMember({"macro", "positive"}));
  app.add_option("--clean", clean, "Cleaning policy")
      ->capture_default_str()->check(CLI::IsMember({"drop", "impute"}));
  app.add_option("--n", synth.n, "Synthetic row count")->capture_default_str();
  app.add_option("--noise", synth.noise, "Synthetic label noise rate")->capture_default_str();
  app.add_option("--positive-rate", synth.positive_rate, "Synthetic positive fraction before noise")
      ->capture_default_str();
  app.add_flag("--scaling", scaling, "Benchmark: also time the forest at t and 2t trees");

  auto* train = app.add_subcommand("train", "Fit the ensemble and report held-out metrics")->fallthrough();
  auto* evaluate = app.add_subcommand("evaluate", "Score a saved model on a labeled CSV")->fallthrough();
  auto* predict = app.add_subcommand("predict", "Per-row class, probability and risk bands")->fallthrough();
  auto* benchmark = app.add_subcommand("benchmark", "Compare baselines and the ensemble")->fallthrough();
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic stroke CSV")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  config.averaging = wve::ParseAveraging(averaging);
  config.clean_policy = clean == "impute" ? wve::CleanPolicy::kImputeMode : wve::CleanPolicy::kDrop;

  try {
    if (train->parsed()) return Train(config);
    if (evaluate->parsed()) return Evaluate(config);
    if (predict->parsed()) return Predict(config);
    if (benchmark->parsed()) return Benchmark(config, scaling);
    if (synth_cmd->parsed()) return Synth(config, synth);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const wve::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

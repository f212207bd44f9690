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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace wve {

enum class ColumnKind { kCategorical, kNumeric, kBinary };

std::string_view ColumnKindName(ColumnKind kind);

// Admissible interval for a numeric column. Values outside it are treated as
// quality failures by CleanTable.
struct NumericRange {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_inclusive = true;
  bool hi_inclusive = true;

  bool Contains(double v) const {
    const bool above = lo_inclusive ? v >= lo : v > lo;
    const bool below = hi_inclusive ? v <= hi : v < hi;
    return above && below;
  }
};

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kNumeric;
  // Categorical only, in one-hot order.
  std::vector<std::string> categories;
  // Categorical only: a category that marks an unobserved value.
  std::optional<std::string> missing_token;
  // Numeric only.
  std::optional<NumericRange> range;
};

struct FeatureSchema {
  std::vector<ColumnSpec> features;
  std::string target;

  std::size_t feature_count() const { return features.size(); }
  std::size_t width() const { return features.size() + 1; }
  std::optional<std::size_t> FindFeature(std::string_view name) const;
};

// The stroke-record schema: ten patient features plus the binary target,
// in the column order of the sample data format.
FeatureSchema StrokeSchema();

namespace stroke {
inline constexpr std::size_t kGender = 0;
inline constexpr std::size_t kAge = 1;
inline constexpr std::size_t kHypertension = 2;
inline constexpr std::size_t kHeartDisease = 3;
inline constexpr std::size_t kEverMarried = 4;
inline constexpr std::size_t kJobType = 5;
inline constexpr std::size_t kResidence = 6;
inline constexpr std::size_t kGlucose = 7;
inline constexpr std::size_t kBmi = 8;
inline constexpr std::size_t kSmoking = 9;
}  // namespace stroke

// Numeric and binary cells hold double, categorical cells hold text.
using Cell = std::variant<double, std::string>;
using Record = std::vector<Cell>;

struct RawTable {
  FeatureSchema schema;
  // When false, rows carry only the feature cells (prediction input).
  bool has_target = true;
  std::vector<Record> rows;

  std::size_t row_width() const {
    return has_target ? schema.width() : schema.feature_count();
  }
  int label(std::size_t row) const;
};

enum class TargetColumn { kRequired, kOptional };

// Parses header + data lines. Header names match case-insensitively with
// '_' and ' ' treated as equal.
RawTable ParseTable(std::string_view csv, const FeatureSchema& schema,
                    TargetColumn target = TargetColumn::kRequired);

std::string SerializeTable(const RawTable& table);

enum class CleanPolicy { kDrop, kImputeMode };

struct CleanReport {
  std::size_t input_count = 0;
  std::size_t retained_count = 0;
  std::size_t dropped_count = 0;
  // Keys are "out_of_range.<column>" and "missing.<column>"; each dropped
  // row is tallied once, under the first rule it fails in column order.
  std::map<std::string, std::size_t> drop_tallies;
  // Keys are "<column>" and count replaced cells.
  std::map<std::string, std::size_t> imputation_tallies;

  std::string ToKeyValueText() const;
};

std::pair<RawTable, CleanReport> CleanTable(const RawTable& raw,
                                            CleanPolicy policy);

struct EncodedColumn {
  std::string name;
  std::size_t origin = 0;
  ColumnKind kind = ColumnKind::kNumeric;
  // One-hot columns only.
  std::string category;
};

// Dense row-major matrix of encoded features plus {0,1} labels.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<EncodedColumn> columns;
  std::vector<std::string> origin_names;
  // Empty when encoded from a table without target.
  std::vector<int> labels;

  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * cols, cols};
  }
  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
  bool has_labels() const { return labels.size() == rows && rows > 0; }

  FeatureMatrix Subset(std::span<const std::size_t> indices) const;
  // Stable identity of the encoding; stored in model documents.
  std::vector<std::string> Fingerprint() const;
};

// Builds a matrix from plain arrays with generic column names f0..f{d-1}.
FeatureMatrix MakeMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> values, std::vector<int> labels);

FeatureMatrix EncodeRecords(const RawTable& clean);

std::size_t EncodedWidth(const FeatureSchema& schema);

struct SplitSpec {
  double train_ratio = 0.8;
  std::uint64_t seed = 0;
  bool stratified = true;
};

std::pair<FeatureMatrix, FeatureMatrix> StratifiedSplit(const FeatureMatrix& m,
                                                        const SplitSpec& spec);

// Linear risk score over age, glucose, BMI and hypertension; positive when
// the score reaches the threshold.
struct PlantedRule {
  double age_weight = 1.0;
  double glucose_weight = 0.8;
  double bmi_weight = 0.5;
  double hypertension_weight = 0.7;
  // Unset: calibrated to the positive-rate target on the generated rows.
  std::optional<double> threshold;

  double Score(double age, double glucose, double bmi, double hypertension) const;
  // Evaluates the rule on a stroke-schema record; threshold must be set.
  int Apply(const Record& record) const;
};

struct SynthSpec {
  std::size_t n = 2000;
  std::uint64_t seed = 0;
  double positive_rate = 1.0 / 3.0;
  double noise_rate = 0.1;
  PlantedRule rule;
};

// Returns the table and the rule with its resolved threshold.
std::pair<RawTable, PlantedRule> SynthesizeWithRule(const SynthSpec& spec);

RawTable GenerateSynthetic(const SynthSpec& spec);

}  // namespace wve

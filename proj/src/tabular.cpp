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

#include "wve/tabular.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wve/error.hpp"
#include "wve/rng.hpp"

namespace wve {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(Trim(line.substr(start)));
      break;
    }
    fields.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

std::string NormalizeName(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (c == '_') c = ' ';
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::string KeyName(std::string_view name) {
  std::string out = NormalizeName(name);
  std::replace(out.begin(), out.end(), ' ', '_');
  return out;
}

std::optional<double> ParseNumber(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string FormatNumber(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

Cell ParseCell(std::string_view text, const ColumnSpec& column, std::size_t row,
               std::size_t col) {
  switch (column.kind) {
    case ColumnKind::kCategorical: {
      const std::string normalized = NormalizeName(text);
      for (const auto& category : column.categories) {
        if (NormalizeName(category) == normalized) return category;
      }
      return std::string(text);
    }
    case ColumnKind::kNumeric: {
      const auto value = ParseNumber(text);
      if (!value) {
        throw Error(ErrorKind::kTypeError,
                    "row " + std::to_string(row) + ", column '" + column.name +
                        "': cannot parse '" + std::string(text) + "' as a number",
                    row, col);
      }
      return *value;
    }
    case ColumnKind::kBinary: {
      const auto value = ParseNumber(text);
      if (!value || (*value != 0.0 && *value != 1.0)) {
        throw Error(ErrorKind::kTypeError,
                    "row " + std::to_string(row) + ", column '" + column.name +
                        "': expected 0 or 1, got '" + std::string(text) + "'",
                    row, col);
      }
      return *value;
    }
  }
  return 0.0;
}

double Median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

std::string_view ColumnKindName(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::kCategorical: return "categorical";
    case ColumnKind::kNumeric: return "numeric";
    case ColumnKind::kBinary: return "binary";
  }
  return "numeric";
}

std::optional<std::size_t> FeatureSchema::FindFeature(std::string_view name) const {
  const std::string key = NormalizeName(name);
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (NormalizeName(features[i].name) == key) return i;
  }
  return std::nullopt;
}

FeatureSchema StrokeSchema() {
  FeatureSchema schema;
  auto categorical = [](std::string name, std::vector<std::string> categories,
                        std::optional<std::string> missing = std::nullopt) {
    ColumnSpec c;
    c.name = std::move(name);
    c.kind = ColumnKind::kCategorical;
    c.categories = std::move(categories);
    c.missing_token = std::move(missing);
    return c;
  };
  auto numeric = [](std::string name, NumericRange range) {
    ColumnSpec c;
    c.name = std::move(name);
    c.kind = ColumnKind::kNumeric;
    c.range = range;
    return c;
  };
  auto binary = [](std::string name) {
    ColumnSpec c;
    c.name = std::move(name);
    c.kind = ColumnKind::kBinary;
    return c;
  };
  schema.features = {
      categorical("gender", {"Male", "Female", "Other"}),
      numeric("age", {0.0, 120.0, true, true}),
      binary("hypertension"),
      binary("Heart_disease"),
      categorical("Ever_married", {"No", "Yes"}),
      categorical("job type", {"Govt", "Private", "Self-employed", "Children", "Never-worked"}),
      categorical("residence type", {"Urban", "Rural"}),
      numeric("Avg_Glucose level", {20.0, 500.0, false, false}),
      numeric("BMI", {10.0, 80.0, false, false}),
      categorical("smoking status",
                  {"formerly smoked", "never smoked", "smokes", "Unknown"}, "Unknown"),
  };
  schema.target = "stroke";
  return schema;
}

int RawTable::label(std::size_t row) const {
  Require(has_target, ErrorKind::kInvalidArgument, "table has no target column");
  return static_cast<int>(std::get<double>(rows[row].back()));
}

RawTable ParseTable(std::string_view csv, const FeatureSchema& schema,
                    TargetColumn target) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t end = csv.find('\n', start);
    if (end == std::string_view::npos) end = csv.size();
    const std::string_view line = Trim(csv.substr(start, end - start));
    if (!line.empty()) lines.push_back(csv.substr(start, end - start));
    start = end + 1;
  }
  if (lines.empty()) {
    throw Error(ErrorKind::kUnknownColumn, "missing header line");
  }

  const auto header = SplitFields(lines.front());
  RawTable table;
  table.schema = schema;
  if (header.size() == schema.width()) {
    table.has_target = true;
  } else if (target == TargetColumn::kOptional && header.size() == schema.feature_count()) {
    table.has_target = false;
  } else {
    throw Error(ErrorKind::kUnknownColumn,
                "header has " + std::to_string(header.size()) + " columns, expected " +
                    std::to_string(schema.width()));
  }
  for (std::size_t j = 0; j < header.size(); ++j) {
    const std::string& expected = j < schema.feature_count() ? schema.features[j].name : schema.target;
    if (NormalizeName(header[j]) != NormalizeName(expected)) {
      throw Error(ErrorKind::kUnknownColumn,
                  "header column " + std::to_string(j) + " is '" + std::string(header[j]) +
                      "', expected '" + expected + "'",
                  std::nullopt, j);
    }
  }

  const std::size_t width = table.row_width();
  ColumnSpec target_spec;
  target_spec.name = schema.target;
  target_spec.kind = ColumnKind::kBinary;
  table.rows.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t row = i - 1;
    const auto fields = SplitFields(lines[i]);
    if (fields.size() != width) {
      throw Error(ErrorKind::kMalformedRow,
                  "row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                      " fields, expected " + std::to_string(width),
                  row);
    }
    Record record;
    record.reserve(width);
    for (std::size_t j = 0; j < width; ++j) {
      const ColumnSpec& spec = j < schema.feature_count() ? schema.features[j] : target_spec;
      record.push_back(ParseCell(fields[j], spec, row, j));
    }
    table.rows.push_back(std::move(record));
  }
  return table;
}

std::string SerializeTable(const RawTable& table) {
  std::string out;
  const auto& schema = table.schema;
  for (std::size_t j = 0; j < schema.feature_count(); ++j) {
    if (j > 0) out += ',';
    out += schema.features[j].name;
  }
  if (table.has_target) out += "," + schema.target;
  out += '\n';
  for (const auto& record : table.rows) {
    for (std::size_t j = 0; j < record.size(); ++j) {
      if (j > 0) out += ',';
      if (const auto* number = std::get_if<double>(&record[j])) {
        out += FormatNumber(*number);
      } else {
        out += std::get<std::string>(record[j]);
      }
    }
    out += '\n';
  }
  return out;
}

std::string CleanReport::ToKeyValueText() const {
  std::ostringstream out;
  out << "input_count = " << input_count << '\n';
  out << "retained_count = " << retained_count << '\n';
  out << "dropped_count = " << dropped_count << '\n';
  for (const auto& [key, count] : drop_tallies) out << "drop." << key << " = " << count << '\n';
  for (const auto& [key, count] : imputation_tallies) {
    out << "impute." << key << " = " << count << '\n';
  }
  return out.str();
}

std::pair<RawTable, CleanReport> CleanTable(const RawTable& raw, CleanPolicy policy) {
  const auto& schema = raw.schema;
  const std::size_t d = schema.feature_count();

  CleanReport report;
  report.input_count = raw.rows.size();
  for (const auto& column : schema.features) {
    if (column.range) {
      report.drop_tallies["out_of_range." + KeyName(column.name)] = 0;
      report.imputation_tallies[KeyName(column.name)] = 0;
    }
    if (column.missing_token) {
      report.drop_tallies["missing." + KeyName(column.name)] = 0;
      report.imputation_tallies[KeyName(column.name)] = 0;
    }
  }

  auto failure = [&](const Record& record, std::size_t j) -> std::optional<std::string> {
    const ColumnSpec& column = schema.features[j];
    if (column.range && !column.range->Contains(std::get<double>(record[j]))) {
      return "out_of_range." + KeyName(column.name);
    }
    if (column.missing_token && std::get<std::string>(record[j]) == *column.missing_token) {
      return "missing." + KeyName(column.name);
    }
    return std::nullopt;
  };

  RawTable out;
  out.schema = schema;
  out.has_target = raw.has_target;

  if (policy == CleanPolicy::kDrop) {
    for (const auto& record : raw.rows) {
      std::optional<std::string> first_failure;
      for (std::size_t j = 0; j < d && !first_failure; ++j) first_failure = failure(record, j);
      if (first_failure) {
        ++report.drop_tallies[*first_failure];
      } else {
        out.rows.push_back(record);
      }
    }
  } else {
    // Replacement values come from the whole table.
    std::vector<std::optional<Cell>> replacement(d);
    for (std::size_t j = 0; j < d; ++j) {
      const ColumnSpec& column = schema.features[j];
      if (column.range) {
        std::vector<double> valid;
        for (const auto& record : raw.rows) {
          const double v = std::get<double>(record[j]);
          if (column.range->Contains(v)) valid.push_back(v);
        }
        if (!valid.empty()) replacement[j] = Median(std::move(valid));
      } else if (column.missing_token) {
        std::vector<std::size_t> counts(column.categories.size(), 0);
        for (const auto& record : raw.rows) {
          const auto& value = std::get<std::string>(record[j]);
          if (value == *column.missing_token) continue;
          const auto it = std::find(column.categories.begin(), column.categories.end(), value);
          if (it != column.categories.end()) ++counts[it - column.categories.begin()];
        }
        // Ties go to the earliest declared category.
        const auto best = std::max_element(counts.begin(), counts.end());
        if (*best > 0) replacement[j] = column.categories[best - counts.begin()];
      }
    }
    for (const auto& record : raw.rows) {
      Record fixed = record;
      for (std::size_t j = 0; j < d; ++j) {
        if (!failure(record, j)) continue;
        if (!replacement[j]) {
          throw Error(ErrorKind::kEmptyAfterClean,
                      "no valid values to impute column '" + schema.features[j].name + "'");
        }
        fixed[j] = *replacement[j];
        ++report.imputation_tallies[KeyName(schema.features[j].name)];
      }
      out.rows.push_back(std::move(fixed));
    }
  }

  report.retained_count = out.rows.size();
  report.dropped_count = report.input_count - report.retained_count;
  if (out.rows.empty()) {
    throw Error(ErrorKind::kEmptyAfterClean, "no rows remain after cleaning");
  }
  return {std::move(out), report};
}

FeatureMatrix FeatureMatrix::Subset(std::span<const std::size_t> indices) const {
  FeatureMatrix out;
  out.rows = indices.size();
  out.cols = cols;
  out.columns = columns;
  out.origin_names = origin_names;
  out.values.reserve(out.rows * cols);
  for (std::size_t i : indices) {
    const auto r = row(i);
    out.values.insert(out.values.end(), r.begin(), r.end());
    if (!labels.empty()) out.labels.push_back(labels[i]);
  }
  return out;
}

std::vector<std::string> FeatureMatrix::Fingerprint() const {
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (const auto& c : columns) names.push_back(c.name);
  return names;
}

FeatureMatrix MakeMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                         std::vector<int> labels) {
  Require(values.size() == rows * cols, ErrorKind::kLengthMismatch,
          "value count does not match rows x cols");
  Require(labels.empty() || labels.size() == rows, ErrorKind::kLengthMismatch,
          "label count does not match rows");
  FeatureMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.values = std::move(values);
  m.labels = std::move(labels);
  for (std::size_t j = 0; j < cols; ++j) {
    const std::string name = "f" + std::to_string(j);
    m.columns.push_back({name, j, ColumnKind::kNumeric, {}});
    m.origin_names.push_back(name);
  }
  return m;
}

std::size_t EncodedWidth(const FeatureSchema& schema) {
  std::size_t width = 0;
  for (const auto& c : schema.features) {
    width += c.kind == ColumnKind::kCategorical ? c.categories.size() : 1;
  }
  return width;
}

FeatureMatrix EncodeRecords(const RawTable& clean) {
  const auto& schema = clean.schema;
  FeatureMatrix m;
  m.rows = clean.rows.size();
  m.cols = EncodedWidth(schema);
  for (std::size_t j = 0; j < schema.feature_count(); ++j) {
    const ColumnSpec& column = schema.features[j];
    m.origin_names.push_back(column.name);
    if (column.kind == ColumnKind::kCategorical) {
      for (const auto& category : column.categories) {
        m.columns.push_back({column.name + "=" + category, j, column.kind, category});
      }
    } else {
      m.columns.push_back({column.name, j, column.kind, {}});
    }
  }

  m.values.assign(m.rows * m.cols, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const Record& record = clean.rows[i];
    double* out = m.values.data() + i * m.cols;
    std::size_t offset = 0;
    for (std::size_t j = 0; j < schema.feature_count(); ++j) {
      const ColumnSpec& column = schema.features[j];
      if (column.kind == ColumnKind::kCategorical) {
        const auto& value = std::get<std::string>(record[j]);
        const auto it = std::find(column.categories.begin(), column.categories.end(), value);
        if (it == column.categories.end()) {
          throw Error(ErrorKind::kUnseenCategory,
                      "row " + std::to_string(i) + ", column '" + column.name +
                          "': unseen category '" + value + "'",
                      i, j);
        }
        out[offset + (it - column.categories.begin())] = 1.0;
        offset += column.categories.size();
      } else {
        out[offset++] = std::get<double>(record[j]);
      }
    }
    if (clean.has_target) m.labels.push_back(clean.label(i));
  }
  return m;
}

std::pair<FeatureMatrix, FeatureMatrix> StratifiedSplit(const FeatureMatrix& m,
                                                        const SplitSpec& spec) {
  Require(spec.train_ratio > 0.0 && spec.train_ratio <= 1.0, ErrorKind::kInvalidArgument,
          "train ratio must lie in (0, 1]");
  Require(m.labels.size() == m.rows, ErrorKind::kInvalidArgument,
          "split requires a labelled matrix");

  // The epsilon absorbs representation error, e.g. 0.7 * 10 -> 6.999...
  auto train_count = [&](std::size_t count) {
    const auto k = static_cast<std::size_t>(std::floor(spec.train_ratio * count + 1e-9));
    return std::min(k, count);
  };

  Rng rng(spec.seed);
  std::vector<std::size_t> train;
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < m.rows; ++i) by_class[m.labels[i] == 1 ? 1 : 0].push_back(i);

  if (spec.stratified) {
    for (int c = 0; c < 2; ++c) {
      auto& idx = by_class[c];
      if (idx.empty()) {
        throw Error(ErrorKind::kDegenerateSplit,
                    "class " + std::to_string(c) + " is absent; cannot stratify");
      }
      rng.Shuffle(std::span<std::size_t>(idx));
      const std::size_t k = train_count(idx.size());
      if (k == 0) {
        throw Error(ErrorKind::kDegenerateSplit,
                    "class " + std::to_string(c) + " receives no training rows");
      }
      train.insert(train.end(), idx.begin(), idx.begin() + k);
    }
  } else {
    std::vector<std::size_t> all(m.rows);
    std::iota(all.begin(), all.end(), 0);
    rng.Shuffle(std::span<std::size_t>(all));
    train.assign(all.begin(), all.begin() + train_count(all.size()));
    for (int c = 0; c < 2; ++c) {
      if (by_class[c].empty()) continue;
      const bool present = std::any_of(train.begin(), train.end(),
                                       [&](std::size_t i) { return m.labels[i] == c; });
      if (!present) {
        throw Error(ErrorKind::kDegenerateSplit,
                    "class " + std::to_string(c) + " receives no training rows");
      }
    }
  }

  std::sort(train.begin(), train.end());
  std::vector<bool> in_train(m.rows, false);
  for (std::size_t i : train) in_train[i] = true;
  std::vector<std::size_t> test;
  for (std::size_t i = 0; i < m.rows; ++i) {
    if (!in_train[i]) test.push_back(i);
  }
  return {m.Subset(train), m.Subset(test)};
}

double PlantedRule::Score(double age, double glucose, double bmi, double hypertension) const {
  return age_weight * (age - 55.0) / 15.0 + glucose_weight * (glucose - 120.0) / 50.0 +
         bmi_weight * (bmi - 29.0) / 6.0 + hypertension_weight * hypertension;
}

int PlantedRule::Apply(const Record& record) const {
  Require(threshold.has_value(), ErrorKind::kInvalidArgument, "planted rule has no threshold");
  const double score = Score(std::get<double>(record[stroke::kAge]),
                             std::get<double>(record[stroke::kGlucose]),
                             std::get<double>(record[stroke::kBmi]),
                             std::get<double>(record[stroke::kHypertension]));
  return score >= *threshold ? 1 : 0;
}

std::pair<RawTable, PlantedRule> SynthesizeWithRule(const SynthSpec& spec) {
  Require(spec.noise_rate >= 0.0 && spec.noise_rate < 0.5, ErrorKind::kInvalidArgument,
          "noise rate must lie in [0, 0.5)");
  Require(spec.positive_rate > 0.0 && spec.positive_rate < 1.0, ErrorKind::kInvalidArgument,
          "positive rate must lie in (0, 1)");

  RawTable table;
  table.schema = StrokeSchema();
  table.has_target = true;
  table.rows.reserve(spec.n);

  auto round_to = [](double v, double scale) { return std::round(v * scale) / scale; };
  auto pick = [](Rng& rng, std::span<const double> cumulative) {
    const double u = rng.Uniform();
    std::size_t k = 0;
    while (k + 1 < cumulative.size() && u >= cumulative[k]) ++k;
    return k;
  };

  Rng features(DeriveSeed(spec.seed, 0));
  static constexpr double kGender[] = {0.45, 0.99, 1.0};
  static constexpr double kJob[] = {0.15, 0.70, 0.90, 0.90, 1.0};
  static constexpr double kSmoking[] = {0.25, 0.75, 1.0};
  const auto& schema = table.schema;
  std::vector<double> scores;
  scores.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    Record r(schema.width());
    r[stroke::kGender] = schema.features[stroke::kGender].categories[pick(features, kGender)];
    const double age = std::round(features.Uniform(1.0, 90.0));
    r[stroke::kAge] = age;
    const double hypertension = features.Bernoulli(age > 50.0 ? 0.35 : 0.08) ? 1.0 : 0.0;
    r[stroke::kHypertension] = hypertension;
    r[stroke::kHeartDisease] = features.Bernoulli(age > 60.0 ? 0.15 : 0.04) ? 1.0 : 0.0;
    r[stroke::kEverMarried] =
        std::string(age >= 18.0 && features.Bernoulli(0.7) ? "Yes" : "No");
    const auto& jobs = schema.features[stroke::kJobType].categories;
    r[stroke::kJobType] = age < 16.0 ? jobs[3] : jobs[pick(features, kJob)];
    r[stroke::kResidence] = std::string(features.Bernoulli(0.5) ? "Urban" : "Rural");
    const double glucose = features.Bernoulli(0.2) ? features.Normal(200.0, 45.0)
                                                   : features.Normal(95.0, 20.0);
    r[stroke::kGlucose] = round_to(std::clamp(glucose, 55.0, 290.0), 100.0);
    r[stroke::kBmi] = round_to(std::clamp(features.Normal(29.0, 6.0), 12.0, 70.0), 10.0);
    r[stroke::kSmoking] =
        schema.features[stroke::kSmoking].categories[pick(features, kSmoking)];
    scores.push_back(spec.rule.Score(age, std::get<double>(r[stroke::kGlucose]),
                                     std::get<double>(r[stroke::kBmi]), hypertension));
    table.rows.push_back(std::move(r));
  }

  PlantedRule rule = spec.rule;
  if (!rule.threshold) {
    if (scores.empty()) {
      rule.threshold = 0.0;
    } else {
      std::vector<double> sorted = scores;
      std::sort(sorted.begin(), sorted.end());
      const auto idx = std::min(sorted.size() - 1,
                                static_cast<std::size_t>((1.0 - spec.positive_rate) * sorted.size()));
      rule.threshold = sorted[idx];
    }
  }

  Rng noise(DeriveSeed(spec.seed, 1));
  for (std::size_t i = 0; i < spec.n; ++i) {
    int label = scores[i] >= *rule.threshold ? 1 : 0;
    if (noise.Bernoulli(spec.noise_rate)) label = 1 - label;
    table.rows[i].back() = static_cast<double>(label);
  }
  return {std::move(table), rule};
}

RawTable GenerateSynthetic(const SynthSpec& spec) { return SynthesizeWithRule(spec).first; }

}  // namespace wve

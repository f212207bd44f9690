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

#include "wve/model_io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "wve/baselines.hpp"
#include "wve/error.hpp"
#include "wve/voting.hpp"

namespace wve {
namespace {

using nlohmann::json;

constexpr std::string_view kFormatTag = "wve-model";

json TreeToJson(const Tree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes) {
    nodes.push_back({n.feature, n.threshold, n.split_bin, n.left, n.right, n.default_left ? 1 : 0,
                     n.value, n.cover});
  }
  return {{"width", t.width}, {"nodes", std::move(nodes)}, {"importance", t.importance}};
}

Tree TreeFromJson(const json& j) {
  Tree t;
  t.width = j.at("width").get<std::size_t>();
  for (const auto& n : j.at("nodes")) {
    if (!n.is_array() || n.size() != 8) throw Error(ErrorKind::kSchemaViolation, "tree node must have 8 fields");
    TreeNode node;
    node.feature = n[0].get<int>();
    node.threshold = n[1].get<double>();
    node.split_bin = n[2].get<int>();
    node.left = n[3].get<int>();
    node.right = n[4].get<int>();
    node.default_left = n[5].get<int>() != 0;
    node.value = n[6].get<double>();
    node.cover = n[7].get<double>();
    t.nodes.push_back(node);
  }
  t.importance = j.at("importance").get<std::vector<double>>();
  t.Validate();
  return t;
}

json TreesToJson(const std::vector<Tree>& trees) {
  json out = json::array();
  for (const auto& t : trees) out.push_back(TreeToJson(t));
  return out;
}

std::vector<Tree> TreesFromJson(const json& j) {
  std::vector<Tree> trees;
  for (const auto& t : j) trees.push_back(TreeFromJson(t));
  return trees;
}

json ScalerToJson(const Standardizer& s) { return {{"mean", s.mean}, {"stddev", s.stddev}}; }

Standardizer ScalerFromJson(const json& j) {
  Standardizer s;
  s.mean = j.at("mean").get<std::vector<double>>();
  s.stddev = j.at("stddev").get<std::vector<double>>();
  return s;
}

std::string LossName(Loss loss) { return loss == Loss::kLogLoss ? "log_loss" : "squared_error"; }

Loss ParseLoss(const std::string& s) {
  if (s == "log_loss") return Loss::kLogLoss;
  if (s == "squared_error") return Loss::kSquaredError;
  throw Error(ErrorKind::kSchemaViolation, "unknown loss '" + s + "'");
}

std::string ModeName(BoostMode mode) { return mode == BoostMode::kExact ? "exact" : "histogram"; }

BoostMode ParseMode(const std::string& s) {
  if (s == "exact") return BoostMode::kExact;
  if (s == "histogram") return BoostMode::kHistogram;
  throw Error(ErrorKind::kSchemaViolation, "unknown boosting mode '" + s + "'");
}

json MaxFeaturesToJson(const MaxFeatures& mf) {
  switch (mf.mode) {
    case MaxFeatures::Mode::kAll: return "all";
    case MaxFeatures::Mode::kSqrt: return "sqrt";
    case MaxFeatures::Mode::kCount: return mf.count;
  }
  return "all";
}

}  // namespace

json BoostParamsToJson(const BoostParams& p) {
  return {{"rounds", p.rounds},       {"learning_rate", p.learning_rate},
          {"gamma", p.gamma},         {"lambda", p.lambda},
          {"max_depth", p.max_depth}, {"max_bins", p.max_bins},
          {"loss", LossName(p.loss)}, {"mode", ModeName(p.mode)},
          {"seed", p.seed}};
}

BoostParams BoostParamsFromJson(const json& j) {
  BoostParams p;
  p.rounds = j.at("rounds").get<std::size_t>();
  p.learning_rate = j.at("learning_rate").get<double>();
  p.gamma = j.at("gamma").get<double>();
  p.lambda = j.at("lambda").get<double>();
  p.max_depth = j.at("max_depth").get<int>();
  p.max_bins = j.at("max_bins").get<std::size_t>();
  p.loss = ParseLoss(j.at("loss").get<std::string>());
  p.mode = ParseMode(j.at("mode").get<std::string>());
  p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

json ForestParamsToJson(const ForestParams& p) {
  return {{"n_trees", p.n_trees},
          {"bootstrap", p.bootstrap},
          {"max_features", MaxFeaturesToJson(p.max_features)},
          {"max_depth", p.max_depth},
          {"min_samples_split", p.min_samples_split},
          {"min_samples_leaf", p.min_samples_leaf},
          {"seed", p.seed}};
}

json ModelToJson(const Classifier& model) {
  switch (model.kind()) {
    case ModelKind::kForest: {
      const auto& f = dynamic_cast<const Forest&>(model);
      return {{"task", f.task() == ForestTask::kClassification ? "classification" : "regression"},
              {"width", f.width()},
              {"column_origins", f.column_origins()},
              {"origin_names", f.origin_names()},
              {"trees", TreesToJson(f.trees())}};
    }
    case ModelKind::kBoosted: {
      const auto& b = dynamic_cast<const BoostedModel&>(model);
      return {{"width", b.width()},
              {"base_score", b.base_score()},
              {"params", BoostParamsToJson(b.params())},
              {"trees", TreesToJson(b.trees())}};
    }
    case ModelKind::kWeightedEnsemble: {
      const auto& e = dynamic_cast<const WeightedEnsemble&>(model);
      json members = json::array();
      for (const auto& m : e.members()) {
        members.push_back({{"kind", ModelKindName(m->kind())}, {"model", ModelToJson(*m)}});
      }
      return {{"weights", e.weights()}, {"members", std::move(members)}};
    }
    case ModelKind::kLogistic:
    case ModelKind::kLinearSvm: {
      const auto& l = dynamic_cast<const LinearModel&>(model);
      return {{"weights", l.weights()}, {"bias", l.bias()}, {"scaler", ScalerToJson(l.scaler())}};
    }
    case ModelKind::kKnn: {
      const auto& k = dynamic_cast<const KnnModel&>(model);
      return {{"k", k.k()},
              {"rows", k.rows()},
              {"scaler", ScalerToJson(k.scaler())},
              {"train", k.train()},
              {"labels", k.labels()}};
    }
    case ModelKind::kGaussianNb: {
      const auto& nb = dynamic_cast<const GaussianNbModel&>(model);
      return {{"priors", nb.priors()}, {"means", nb.means()}, {"variances", nb.variances()}};
    }
    case ModelKind::kDecisionTree: {
      const auto& dt = dynamic_cast<const DecisionTreeModel&>(model);
      return {{"tree", TreeToJson(dt.tree())}};
    }
  }
  throw Error(ErrorKind::kInvalidArgument, "unsupported model kind");
}

std::shared_ptr<const Classifier> ModelFromJson(ModelKind kind, const json& j) {
  try {
    switch (kind) {
      case ModelKind::kForest: {
        const auto task = j.at("task").get<std::string>();
        if (task != "classification" && task != "regression") {
          throw Error(ErrorKind::kSchemaViolation, "unknown forest task '" + task + "'");
        }
        return std::make_shared<Forest>(
            task == "classification" ? ForestTask::kClassification : ForestTask::kRegression,
            j.at("width").get<std::size_t>(), TreesFromJson(j.at("trees")),
            j.at("column_origins").get<std::vector<std::size_t>>(),
            j.at("origin_names").get<std::vector<std::string>>());
      }
      case ModelKind::kBoosted:
        return std::make_shared<BoostedModel>(j.at("width").get<std::size_t>(),
                                              j.at("base_score").get<double>(),
                                              TreesFromJson(j.at("trees")),
                                              BoostParamsFromJson(j.at("params")));
      case ModelKind::kWeightedEnsemble: {
        std::vector<std::shared_ptr<const Classifier>> members;
        for (const auto& m : j.at("members")) {
          members.push_back(
              ModelFromJson(ParseModelKind(m.at("kind").get<std::string>()), m.at("model")));
        }
        return std::make_shared<WeightedEnsemble>(std::move(members),
                                                  j.at("weights").get<std::vector<double>>());
      }
      case ModelKind::kLogistic:
      case ModelKind::kLinearSvm:
        return std::make_shared<LinearModel>(kind, j.at("weights").get<std::vector<double>>(),
                                             j.at("bias").get<double>(), ScalerFromJson(j.at("scaler")));
      case ModelKind::kKnn:
        return std::make_shared<KnnModel>(j.at("k").get<std::size_t>(), ScalerFromJson(j.at("scaler")),
                                          j.at("rows").get<std::size_t>(),
                                          j.at("train").get<std::vector<double>>(),
                                          j.at("labels").get<std::vector<int>>());
      case ModelKind::kGaussianNb:
        return std::make_shared<GaussianNbModel>(
            j.at("priors").get<std::array<double, 2>>(),
            j.at("means").get<std::array<std::vector<double>, 2>>(),
            j.at("variances").get<std::array<std::vector<double>, 2>>());
      case ModelKind::kDecisionTree:
        return std::make_shared<DecisionTreeModel>(TreeFromJson(j.at("tree")));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kSchemaViolation, std::string("malformed model payload: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kSchemaViolation) throw;
    throw Error(ErrorKind::kSchemaViolation, std::string("invalid model payload: ") + e.what());
  }
  throw Error(ErrorKind::kSchemaViolation, "unsupported model kind");
}

std::string SerializeDocument(const ModelDocument& doc) {
  Require(doc.model != nullptr, ErrorKind::kInvalidArgument, "document has no model");
  json j = {{"format", kFormatTag},
            {"format_version", doc.format_version},
            {"kind", ModelKindName(doc.model->kind())},
            {"schema", doc.schema},
            {"metadata", doc.metadata},
            {"model", ModelToJson(*doc.model)}};
  return j.dump(1) + "\n";
}

ModelDocument ParseDocument(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kSchemaViolation, std::string("model document is not valid JSON: ") + e.what());
  }
  ModelDocument doc;
  try {
    if (!j.is_object() || j.value("format", std::string()) != kFormatTag) {
      throw Error(ErrorKind::kSchemaViolation, "not a wve model document");
    }
    doc.format_version = j.at("format_version").get<int>();
    if (doc.format_version != kModelFormatVersion) {
      throw Error(ErrorKind::kVersionMismatch,
                  "model format version " + std::to_string(doc.format_version) +
                      " is not supported (supported version: " + std::to_string(kModelFormatVersion) +
                      ")");
    }
    doc.schema = j.at("schema").get<std::vector<std::string>>();
    doc.metadata = j.at("metadata");
    doc.model = ModelFromJson(ParseModelKind(j.at("kind").get<std::string>()), j.at("model"));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kSchemaViolation, std::string("malformed model document: ") + e.what());
  }
  if (!doc.schema.empty() && doc.schema.size() != doc.model->width()) {
    throw Error(ErrorKind::kSchemaViolation, "schema width differs from model width");
  }
  return doc;
}

void SaveModel(const ModelDocument& doc, const std::filesystem::path& path) {
  const std::string text = SerializeDocument(doc);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "failed writing '" + path.string() + "'");
}

ModelDocument LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kFileNotFound, "file not found: '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseDocument(buffer.str());
}

}  // namespace wve

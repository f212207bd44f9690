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

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wve/boosting.hpp"
#include "wve/classifier.hpp"
#include "wve/forest.hpp"

namespace wve {

inline constexpr int kModelFormatVersion = 1;

// Self-describing persisted model: format version, kind tag, encoded
// column names of the training matrix, creation metadata and payload.
struct ModelDocument {
  int format_version = kModelFormatVersion;
  std::shared_ptr<const Classifier> model;
  std::vector<std::string> schema;
  nlohmann::json metadata = nlohmann::json::object();
};

nlohmann::json ModelToJson(const Classifier& model);
// Throws SchemaViolation on malformed payloads.
std::shared_ptr<const Classifier> ModelFromJson(ModelKind kind, const nlohmann::json& payload);

nlohmann::json BoostParamsToJson(const BoostParams& p);
BoostParams BoostParamsFromJson(const nlohmann::json& j);
nlohmann::json ForestParamsToJson(const ForestParams& p);

std::string SerializeDocument(const ModelDocument& doc);
// Throws SchemaViolation on corrupt or truncated input and VersionMismatch
// on any other format version.
ModelDocument ParseDocument(std::string_view text);

void SaveModel(const ModelDocument& doc, const std::filesystem::path& path);
ModelDocument LoadModel(const std::filesystem::path& path);

}  // namespace wve

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

#include "wve/error.hpp"

namespace wve {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kMalformedRow: return "MalformedRow";
    case ErrorKind::kUnknownColumn: return "UnknownColumn";
    case ErrorKind::kTypeError: return "TypeError";
    case ErrorKind::kEmptyAfterClean: return "EmptyAfterClean";
    case ErrorKind::kUnseenCategory: return "UnseenCategory";
    case ErrorKind::kDegenerateSplit: return "DegenerateSplit";
    case ErrorKind::kWidthMismatch: return "WidthMismatch";
    case ErrorKind::kTaskMismatch: return "TaskMismatch";
    case ErrorKind::kDomainError: return "DomainError";
    case ErrorKind::kSingularLeaf: return "SingularLeaf";
    case ErrorKind::kAllZeroScores: return "AllZeroScores";
    case ErrorKind::kDegenerateFold: return "DegenerateFold";
    case ErrorKind::kMemberFailure: return "MemberFailure";
    case ErrorKind::kNonFinite: return "NonFinite";
    case ErrorKind::kBadK: return "BadK";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kSchemaViolation: return "SchemaViolation";
    case ErrorKind::kVersionMismatch: return "VersionMismatch";
    case ErrorKind::kFileNotFound: return "FileNotFound";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<std::size_t> row, std::optional<std::size_t> column)
    : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
      kind_(kind),
      row_(row),
      column_(column) {}

}  // namespace wve

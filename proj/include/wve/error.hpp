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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wve {

enum class ErrorKind {
  kInvalidArgument,
  kMalformedRow,
  kUnknownColumn,
  kTypeError,
  kEmptyAfterClean,
  kUnseenCategory,
  kDegenerateSplit,
  kWidthMismatch,
  kTaskMismatch,
  kDomainError,
  kSingularLeaf,
  kAllZeroScores,
  kDegenerateFold,
  kMemberFailure,
  kNonFinite,
  kBadK,
  kLengthMismatch,
  kSchemaViolation,
  kVersionMismatch,
  kFileNotFound,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

// Single exception type for the library. The kind drives CLI exit codes;
// row/column are filled in for data-level errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> row = std::nullopt,
        std::optional<std::size_t> column = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> row() const noexcept { return row_; }
  std::optional<std::size_t> column() const noexcept { return column_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> row_;
  std::optional<std::size_t> column_;
};

inline void Require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace wve

// Copyright 2026 The reportfix Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REPORTFIX_REPORT_ERROR_TYPE_H_
#define REPORTFIX_REPORT_ERROR_TYPE_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace reportfix {

// The five report error categories.
enum class ErrorType {
  kOmission = 0,
  kInsertion = 1,
  kSpellingError = 2,
  kSideConfusion = 3,
  kOther = 4,
};

inline constexpr size_t kNumErrorTypes = 5;

inline constexpr std::array<ErrorType, kNumErrorTypes> kAllErrorTypes = {
    ErrorType::kOmission, ErrorType::kInsertion, ErrorType::kSpellingError,
    ErrorType::kSideConfusion, ErrorType::kOther};

inline constexpr size_t Index(ErrorType t) { return static_cast<size_t>(t); }

// Canonical lowercase label, e.g. "side confusion".
std::string_view ToString(ErrorType type);

// Case-insensitive parse of the canonical labels. Surrounding whitespace is
// ignored and internal whitespace runs compare as a single space; anything
// else (synonyms, underscores) is rejected.
std::optional<ErrorType> ParseErrorType(std::string_view text);

}  // namespace reportfix

#endif  // REPORTFIX_REPORT_ERROR_TYPE_H_

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

#include "reportfix/report/error_type.h"

#include <string>

#include "reportfix/common/strings.h"

namespace reportfix {

std::string_view ToString(ErrorType type) {
  switch (type) {
    case ErrorType::kOmission:
      return "omission";
    case ErrorType::kInsertion:
      return "insertion";
    case ErrorType::kSpellingError:
      return "spelling error";
    case ErrorType::kSideConfusion:
      return "side confusion";
    case ErrorType::kOther:
      return "other";
  }
  return "other";
}

std::optional<ErrorType> ParseErrorType(std::string_view text) {
  std::string normalized;
  bool pending_space = false;
  for (char c : StripAsciiWhitespace(text)) {
    if (IsAsciiSpace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) normalized.push_back(' ');
    pending_space = false;
    normalized.push_back(IsAsciiUpper(c) ? static_cast<char>(c - 'A' + 'a') : c);
  }
  for (ErrorType t : kAllErrorTypes) {
    if (normalized == ToString(t)) return t;
  }
  return std::nullopt;
}

}  // namespace reportfix

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

#ifndef REPORTFIX_REPORT_SAMPLE_H_
#define REPORTFIX_REPORT_SAMPLE_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reportfix/report/error_type.h"

namespace reportfix {

// One injected error, expressed as a replace operation: reversing it means
// replacing `corrupted_span` with `original_span`.
//
// `occurrence` (1-based) selects which match of `corrupted_span` the reversal
// acts on, counted in the text as it stood right after this error was applied.
// It is serialized only when present in the source record.
struct ErrorRecord {
  ErrorType error_type = ErrorType::kOther;
  std::string original_span;
  std::string corrupted_span;
  std::string description;
  std::optional<int> occurrence;

  int Occurrence() const { return occurrence.value_or(1); }

  friend bool operator==(const ErrorRecord&, const ErrorRecord&) = default;
};

// A clean source report. Findings and impression are free text.
struct Report {
  std::string report_id;
  std::string findings;
  std::string impression;

  // Flat text form used throughout the pipeline: "Findings: ...\nImpression:
  // ..." with empty sections dropped.
  std::string FlatText() const;

  friend bool operator==(const Report&, const Report&) = default;
};

enum class Split { kTrain, kTest };

std::string_view ToString(Split split);
std::optional<Split> ParseSplit(std::string_view text);

struct CorruptedSample {
  std::string sample_id;
  std::string source_report_id;
  std::string original_text;
  std::string corrupted_text;
  std::vector<ErrorRecord> errors;
  int n_errors = 0;
  Split split = Split::kTrain;

  friend bool operator==(const CorruptedSample&, const CorruptedSample&) = default;
};

// A broken invariant, named by the offending field path (e.g.
// "errors[1].corrupted_span").
struct InvariantViolation {
  std::string field;
  std::string message;
};

// Checks the per-record invariants of an ErrorRecord. `prefix` is prepended to
// field names.
std::vector<InvariantViolation> CheckErrorRecord(const ErrorRecord& record,
                                                 std::string_view prefix = "");

std::vector<InvariantViolation> CheckReport(const Report& report);

// Full CorruptedSample check: record invariants, n_errors, span presence, and
// byte-exact reversibility.
std::vector<InvariantViolation> CheckSample(const CorruptedSample& sample);

}  // namespace reportfix

#endif  // REPORTFIX_REPORT_SAMPLE_H_

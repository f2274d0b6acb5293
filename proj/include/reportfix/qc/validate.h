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

// Scripted sample checks. C1-C4 are structural errors; C5 and C6 are
// heuristics and only warn.

#ifndef REPORTFIX_QC_VALIDATE_H_
#define REPORTFIX_QC_VALIDATE_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "reportfix/report/dataset.h"
#include "reportfix/report/sample.h"

namespace reportfix {

enum class CheckCode {
  kSpanMissing,     // C1
  kIrreversible,    // C2
  kUnchangedEdit,   // C3
  kEditCount,       // C4
  kFormat,          // C5
  kTypeIncoherent,  // C6
};
inline constexpr size_t kNumCheckCodes = 6;
inline constexpr std::array<CheckCode, kNumCheckCodes> kAllCheckCodes = {
    CheckCode::kSpanMissing, CheckCode::kIrreversible, CheckCode::kUnchangedEdit,
    CheckCode::kEditCount,   CheckCode::kFormat,       CheckCode::kTypeIncoherent};

std::string_view ToString(CheckCode code);  // "C1_SPAN_MISSING", ...
std::optional<CheckCode> ParseCheckCode(std::string_view text);
constexpr size_t Index(CheckCode code) { return static_cast<size_t>(code); }

enum class Severity { kError, kWarning };
std::string_view ToString(Severity severity);
Severity DefaultSeverity(CheckCode code);

struct QcFinding {
  std::string sample_id;
  CheckCode check_code = CheckCode::kSpanMissing;
  Severity severity = Severity::kError;
  std::string message;

  bool operator==(const QcFinding&) const = default;
};

// Character-level Levenshtein distance.
size_t EditDistance(std::string_view a, std::string_view b);

// Runs C1-C6 in code order. C2 is skipped when C1 fails, since reversal needs
// every span to be present. Empty result means clean.
std::vector<QcFinding> ValidateSample(const CorruptedSample& sample);

// True when no finding has error severity (C1-C4).
bool PassesStructuralChecks(const std::vector<QcFinding>& findings);

struct SampleFindings {
  std::string sample_id;
  size_t index = 0;  // position in the validated sequence
  std::vector<QcFinding> findings;
};

struct QcReport {
  size_t total = 0;
  size_t clean_count = 0;
  // Number of samples with at least one finding of each code.
  std::array<size_t, kNumCheckCodes> code_counts{};
  // Only samples with findings, in file order.
  std::vector<SampleFindings> flagged;
  // Lines that could not be decoded at all.
  std::vector<DatasetDefect> unreadable;
};

QcReport ValidateSamples(const std::vector<CorruptedSample>& samples);

class ReviewStore;

// Parses the file leniently and validates every decoded sample. When a store is
// given, every flagged sample is enqueued for review.
QcReport ValidateCorpus(const std::filesystem::path& path, ReviewStore* store = nullptr);

std::string QcReportToJson(const QcReport& report);
nlohmann::ordered_json FindingsToJson(const std::vector<QcFinding>& findings);

}  // namespace reportfix

#endif  // REPORTFIX_QC_VALIDATE_H_

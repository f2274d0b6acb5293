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

#include "reportfix/report/sample.h"

#include "reportfix/common/strings.h"
#include "reportfix/report/edits.h"

namespace reportfix {

std::string Report::FlatText() const {
  std::string out;
  if (!findings.empty()) out += "Findings: " + findings;
  if (!impression.empty()) {
    if (!out.empty()) out += "\n";
    out += "Impression: " + impression;
  }
  return out;
}

std::string_view ToString(Split split) { return split == Split::kTrain ? "train" : "test"; }

std::optional<Split> ParseSplit(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "test") return Split::kTest;
  return std::nullopt;
}

std::vector<InvariantViolation> CheckErrorRecord(const ErrorRecord& record,
                                                 std::string_view prefix) {
  std::vector<InvariantViolation> out;
  auto field = [&](std::string_view name) { return std::string(prefix) + std::string(name); };
  if (record.original_span == record.corrupted_span) {
    out.push_back({field("corrupted_span"), "original_span and corrupted_span are identical"});
  }
  if (record.corrupted_span.empty() && record.error_type != ErrorType::kOmission) {
    out.push_back({field("corrupted_span"), "empty corrupted_span is only allowed for omission"});
  }
  if (record.original_span.empty() && record.error_type != ErrorType::kInsertion) {
    out.push_back({field("original_span"), "empty original_span is only allowed for insertion"});
  }
  if (StripAsciiWhitespace(record.description).empty()) {
    out.push_back({field("description"), "description is empty"});
  }
  if (record.occurrence && *record.occurrence < 1) {
    out.push_back({field("occurrence"), "occurrence must be >= 1"});
  }
  return out;
}

std::vector<InvariantViolation> CheckReport(const Report& report) {
  std::vector<InvariantViolation> out;
  if (report.findings.empty() && report.impression.empty()) {
    out.push_back({"findings", "findings and impression are both empty"});
  }
  return out;
}

std::vector<InvariantViolation> CheckSample(const CorruptedSample& sample) {
  std::vector<InvariantViolation> out;
  if (sample.n_errors != static_cast<int>(sample.errors.size())) {
    out.push_back({"n_errors", "n_errors = " + std::to_string(sample.n_errors) +
                                   " but errors has " + std::to_string(sample.errors.size()) +
                                   " entries"});
  }
  if (sample.n_errors < 1 || sample.n_errors > 3) {
    out.push_back({"n_errors", "n_errors must be 1, 2 or 3"});
  }
  for (size_t i = 0; i < sample.errors.size(); ++i) {
    const ErrorRecord& e = sample.errors[i];
    const std::string prefix = "errors[" + std::to_string(i) + "].";
    for (auto& v : CheckErrorRecord(e, prefix)) out.push_back(std::move(v));
    if (!e.corrupted_span.empty() && sample.corrupted_text.find(e.corrupted_span) == std::string::npos) {
      out.push_back({prefix + "corrupted_span", "corrupted_span does not occur in corrupted_text"});
    }
    if (!e.original_span.empty() && sample.original_text.find(e.original_span) == std::string::npos) {
      out.push_back({prefix + "original_span", "original_span does not occur in original_text"});
    }
  }
  try {
    ReverseEdits(sample);
  } catch (const std::runtime_error& e) {
    out.push_back({"corrupted_text", std::string("reverse application failed: ") + e.what()});
  }
  return out;
}

}  // namespace reportfix

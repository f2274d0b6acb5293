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

// Newline-delimited dataset files: one JSON object per line with the fields
// sample_id, source_report_id, original_text, corrupted_text, n_errors, split,
// errors[{error_type, original_span, corrupted_span, description,
// occurrence?}].

#ifndef REPORTFIX_REPORT_DATASET_H_
#define REPORTFIX_REPORT_DATASET_H_

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "reportfix/report/sample.h"

namespace reportfix {

// Thrown for unreadable files (line == 0) and, in strict mode, for the first
// malformed or invariant-violating line.
class DatasetError : public std::runtime_error {
 public:
  DatasetError(std::string path, size_t line, std::string field, std::string message);

  size_t line() const { return line_; }
  const std::string& field() const { return field_; }
  const std::string& message() const { return message_; }

 private:
  size_t line_;
  std::string field_;
  std::string message_;
};

struct DatasetDefect {
  size_t line = 0;  // 1-based
  std::string field;
  std::string message;
  // False when the line could not be decoded at all and no sample was kept.
  bool sample_kept = false;
};

struct ParseOptions {
  // Lenient mode keeps structurally valid samples that break invariants and
  // records defects instead of throwing.
  bool lenient = false;
};

struct ParsedDataset {
  std::vector<CorruptedSample> samples;
  std::vector<DatasetDefect> defects;
};

ParsedDataset ParseDataset(const std::filesystem::path& path, ParseOptions options = {});
ParsedDataset ParseDatasetText(std::string_view text, ParseOptions options = {},
                               std::string_view source_name = "<memory>");

std::string SerializeSample(const CorruptedSample& sample);
std::string SerializeDataset(const std::vector<CorruptedSample>& samples);
void WriteDataset(const std::filesystem::path& path, const std::vector<CorruptedSample>& samples);

nlohmann::ordered_json SampleToJson(const CorruptedSample& sample);

// Decodes one sample object; throws DatasetError(line 0) naming the bad field.
// No invariant checks.
CorruptedSample SampleFromJson(const nlohmann::json& j);

// Same for a single error record; `field_prefix` names it in errors.
ErrorRecord ErrorRecordFromJson(const nlohmann::json& j, const std::string& field_prefix = "error");
nlohmann::ordered_json ErrorRecordToJson(const ErrorRecord& record);

// Clean-report input: either {report_id, findings, impression} or
// {source_report_id, original_text}. The latter is wrapped as a findings-only
// report whose FlatText() is used verbatim by callers via `flat_text`.
struct CleanReport {
  std::string report_id;
  std::string flat_text;
  Split split = Split::kTrain;
};

std::vector<CleanReport> ParseCleanReports(const std::filesystem::path& path);
void WriteCleanReports(const std::filesystem::path& path, const std::vector<CleanReport>& reports);

// Reads a whole file; throws DatasetError on failure.
std::string ReadFileToString(const std::filesystem::path& path);

}  // namespace reportfix

#endif  // REPORTFIX_REPORT_DATASET_H_

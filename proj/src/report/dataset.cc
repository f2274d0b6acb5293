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

#include "reportfix/report/dataset.h"

#include <array>
#include <fstream>
#include <sstream>

#include "reportfix/common/strings.h"

namespace reportfix {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<std::string_view, 7> kSampleFields = {
    "sample_id", "source_report_id", "original_text", "corrupted_text",
    "n_errors",  "split",            "errors"};
constexpr std::array<std::string_view, 5> kErrorFields = {
    "error_type", "original_span", "corrupted_span", "description", "occurrence"};

[[noreturn]] void Fail(const std::string& field, const std::string& message) {
  throw DatasetError("", 0, field, message);
}

const json& Require(const json& obj, const std::string& key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) Fail(path + key, "missing field");
  return *it;
}

std::string RequireString(const json& obj, const std::string& key, const std::string& path) {
  const json& v = Require(obj, key, path);
  if (!v.is_string()) Fail(path + key, "expected a string");
  return v.get<std::string>();
}

template <size_t N>
void RejectUnknownKeys(const json& obj, const std::array<std::string_view, N>& allowed,
                       const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (std::string_view k : allowed) known = known || it.key() == k;
    if (!known) Fail(path + it.key(), "unknown field");
  }
}

ErrorRecord ErrorFromJson(const json& j, const std::string& path) {
  if (!j.is_object()) Fail(path, "expected an object");
  RejectUnknownKeys(j, kErrorFields, path + ".");
  ErrorRecord e;
  const std::string type_text = RequireString(j, "error_type", path + ".");
  const auto type = ParseErrorType(type_text);
  if (!type) Fail(path + ".error_type", "unknown error type \"" + type_text + "\"");
  e.error_type = *type;
  e.original_span = RequireString(j, "original_span", path + ".");
  e.corrupted_span = RequireString(j, "corrupted_span", path + ".");
  e.description = RequireString(j, "description", path + ".");
  if (auto it = j.find("occurrence"); it != j.end()) {
    if (!it->is_number_integer()) Fail(path + ".occurrence", "expected an integer");
    e.occurrence = it->get<int>();
  }
  return e;
}

}  // namespace

DatasetError::DatasetError(std::string path, size_t line, std::string field, std::string message)
    : std::runtime_error(
          (path.empty() ? std::string() : path + ":") +
          (line == 0 ? std::string() : std::to_string(line) + ": ") +
          (field.empty() ? std::string() : field + ": ") + message),
      line_(line),
      field_(std::move(field)),
      message_(std::move(message)) {}

CorruptedSample SampleFromJson(const json& j) {
  if (!j.is_object()) Fail("", "expected an object");
  RejectUnknownKeys(j, kSampleFields, "");
  CorruptedSample s;
  s.sample_id = RequireString(j, "sample_id", "");
  s.source_report_id = RequireString(j, "source_report_id", "");
  s.original_text = RequireString(j, "original_text", "");
  s.corrupted_text = RequireString(j, "corrupted_text", "");
  const json& n = Require(j, "n_errors", "");
  if (!n.is_number_integer()) Fail("n_errors", "expected an integer");
  s.n_errors = n.get<int>();
  const std::string split_text = RequireString(j, "split", "");
  const auto split = ParseSplit(split_text);
  if (!split) Fail("split", "expected \"train\" or \"test\"");
  s.split = *split;
  const json& errors = Require(j, "errors", "");
  if (!errors.is_array()) Fail("errors", "expected an array");
  for (size_t i = 0; i < errors.size(); ++i) {
    s.errors.push_back(ErrorFromJson(errors[i], "errors[" + std::to_string(i) + "]"));
  }
  return s;
}

ErrorRecord ErrorRecordFromJson(const json& j, const std::string& field_prefix) {
  return ErrorFromJson(j, field_prefix);
}

ordered_json ErrorRecordToJson(const ErrorRecord& e) {
  ordered_json ej;
  ej["error_type"] = std::string(ToString(e.error_type));
  ej["original_span"] = e.original_span;
  ej["corrupted_span"] = e.corrupted_span;
  ej["description"] = e.description;
  if (e.occurrence) ej["occurrence"] = *e.occurrence;
  return ej;
}

ordered_json SampleToJson(const CorruptedSample& s) {
  ordered_json j;
  j["sample_id"] = s.sample_id;
  j["source_report_id"] = s.source_report_id;
  j["original_text"] = s.original_text;
  j["corrupted_text"] = s.corrupted_text;
  j["n_errors"] = s.n_errors;
  j["split"] = std::string(ToString(s.split));
  ordered_json errors = ordered_json::array();
  for (const ErrorRecord& e : s.errors) errors.push_back(ErrorRecordToJson(e));
  j["errors"] = std::move(errors);
  return j;
}

std::string SerializeSample(const CorruptedSample& sample) { return SampleToJson(sample).dump(); }

std::string SerializeDataset(const std::vector<CorruptedSample>& samples) {
  std::string out;
  for (const CorruptedSample& s : samples) {
    out += SerializeSample(s);
    out += '\n';
  }
  return out;
}

std::string ReadFileToString(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError(path.string(), 0, "", "cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteDataset(const std::filesystem::path& path, const std::vector<CorruptedSample>& samples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError(path.string(), 0, "", "cannot open file for writing");
  out << SerializeDataset(samples);
  if (!out) throw DatasetError(path.string(), 0, "", "write failed");
}

ParsedDataset ParseDatasetText(std::string_view text, ParseOptions options,
                               std::string_view source_name) {
  ParsedDataset result;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (StripAsciiWhitespace(line).empty()) continue;

    CorruptedSample sample;
    try {
      const json j = json::parse(line);
      sample = SampleFromJson(j);
    } catch (const json::exception& e) {
      if (!options.lenient) throw DatasetError(std::string(source_name), line_no, "", e.what());
      result.defects.push_back({line_no, "", e.what(), false});
      continue;
    } catch (const DatasetError& e) {
      if (!options.lenient) {
        throw DatasetError(std::string(source_name), line_no, e.field(), e.message());
      }
      result.defects.push_back({line_no, e.field(), e.message(), false});
      continue;
    }

    const auto violations = CheckSample(sample);
    if (!violations.empty() && !options.lenient) {
      throw DatasetError(std::string(source_name), line_no, violations.front().field,
                         violations.front().message);
    }
    for (const auto& v : violations) result.defects.push_back({line_no, v.field, v.message, true});
    result.samples.push_back(std::move(sample));
  }
  return result;
}

ParsedDataset ParseDataset(const std::filesystem::path& path, ParseOptions options) {
  return ParseDatasetText(ReadFileToString(path), options, path.string());
}

std::vector<CleanReport> ParseCleanReports(const std::filesystem::path& path) {
  const std::string text = ReadFileToString(path);
  std::vector<CleanReport> out;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (StripAsciiWhitespace(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DatasetError(path.string(), line_no, "", e.what());
    }
    if (!j.is_object()) throw DatasetError(path.string(), line_no, "", "expected an object");
    CleanReport r;
    try {
      if (j.contains("original_text")) {
        r.report_id = RequireString(j, "source_report_id", "");
        r.flat_text = RequireString(j, "original_text", "");
      } else {
        Report report;
        report.report_id = RequireString(j, "report_id", "");
        if (j.contains("findings")) report.findings = RequireString(j, "findings", "");
        if (j.contains("impression")) report.impression = RequireString(j, "impression", "");
        if (!CheckReport(report).empty()) Fail("findings", "findings and impression are both empty");
        r.report_id = report.report_id;
        r.flat_text = report.FlatText();
      }
      if (j.contains("split")) {
        const auto split = ParseSplit(RequireString(j, "split", ""));
        if (!split) Fail("split", "expected \"train\" or \"test\"");
        r.split = *split;
      }
    } catch (const DatasetError& e) {
      throw DatasetError(path.string(), line_no, e.field(), "invalid clean report");
    }
    if (StripAsciiWhitespace(r.flat_text).empty()) {
      throw DatasetError(path.string(), line_no, "original_text", "empty report text");
    }
    out.push_back(std::move(r));
  }
  return out;
}

void WriteCleanReports(const std::filesystem::path& path, const std::vector<CleanReport>& reports) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError(path.string(), 0, "", "cannot open file for writing");
  for (const CleanReport& r : reports) {
    ordered_json j;
    j["source_report_id"] = r.report_id;
    j["original_text"] = r.flat_text;
    j["split"] = std::string(ToString(r.split));
    out << j.dump() << '\n';
  }
}

}  // namespace reportfix

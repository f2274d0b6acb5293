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

#include "reportfix/qc/validate.h"

#include <algorithm>
#include <thread>

#include "json.hpp"
#include "reportfix/common/parallel.h"
#include "reportfix/common/strings.h"
#include "reportfix/qc/review_store.h"
#include "reportfix/report/edits.h"

namespace reportfix {
namespace {

using nlohmann::ordered_json;

constexpr std::array<std::string_view, kNumCheckCodes> kCodeNames = {
    "C1_SPAN_MISSING", "C2_IRREVERSIBLE", "C3_UNCHANGED_EDIT",
    "C4_EDIT_COUNT",   "C5_FORMAT",       "C6_TYPE_INCOHERENT"};

constexpr size_t kMaxSpellingDistance = 3;

bool HasLateralityToken(std::string_view text) {
  const std::string lower = AsciiLower(text);
  for (std::string_view side : {std::string_view("left"), std::string_view("right")}) {
    for (size_t p = lower.find(side); p != std::string::npos; p = lower.find(side, p + 1)) {
      const bool left_ok = p == 0 || !IsAsciiAlpha(lower[p - 1]);
      const size_t e = p + side.size();
      const bool right_ok = e == lower.size() || !IsAsciiAlpha(lower[e]);
      if (left_ok && right_ok) return true;
    }
  }
  return false;
}

std::string FormatProblem(std::string_view text) {
  for (size_t i = 0; i + 1 < text.size(); ++i) {
    if (IsAsciiSpace(text[i]) && IsAsciiSpace(text[i + 1])) {
      return "doubled whitespace at offset " + std::to_string(i);
    }
  }
  if (text.find("**") != std::string_view::npos) return "stray \"**\"";
  if (text.find('<') != std::string_view::npos) return "stray \"<\"";
  if (text.find('>') != std::string_view::npos) return "stray \">\"";
  return "";
}

}  // namespace

std::string_view ToString(CheckCode code) { return kCodeNames[Index(code)]; }

std::optional<CheckCode> ParseCheckCode(std::string_view text) {
  for (CheckCode c : kAllCheckCodes) {
    if (ToString(c) == text) return c;
  }
  return std::nullopt;
}

std::string_view ToString(Severity severity) {
  return severity == Severity::kError ? "error" : "warning";
}

Severity DefaultSeverity(CheckCode code) {
  return Index(code) < Index(CheckCode::kFormat) ? Severity::kError : Severity::kWarning;
}

size_t EditDistance(std::string_view a, std::string_view b) {
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<QcFinding> ValidateSample(const CorruptedSample& s) {
  std::vector<QcFinding> out;
  auto add = [&](CheckCode code, std::string message) {
    out.push_back({s.sample_id, code, DefaultSeverity(code), std::move(message)});
  };
  auto label = [](size_t i) { return "errors[" + std::to_string(i) + "]"; };

  bool spans_present = true;
  for (size_t i = 0; i < s.errors.size(); ++i) {
    const ErrorRecord& e = s.errors[i];
    if (!e.original_span.empty() && s.original_text.find(e.original_span) == std::string::npos) {
      add(CheckCode::kSpanMissing, label(i) + ".original_span not found in original_text");
      spans_present = false;
    }
    if (!e.corrupted_span.empty() &&
        s.corrupted_text.find(e.corrupted_span) == std::string::npos) {
      add(CheckCode::kSpanMissing, label(i) + ".corrupted_span not found in corrupted_text");
      spans_present = false;
    }
  }

  if (spans_present) {
    try {
      const TrackedReversal r = ReverseEditsTracked(s);
      if (r.text != s.original_text) {
        const size_t at = FirstDifference(r.text, s.original_text).value_or(0);
        add(CheckCode::kIrreversible,
            "reversing the edits differs from original_text at offset " + std::to_string(at));
      }
    } catch (const std::exception& e) {
      add(CheckCode::kIrreversible, std::string("reversing the edits failed: ") + e.what());
    }
  }

  for (size_t i = 0; i < s.errors.size(); ++i) {
    if (s.errors[i].original_span == s.errors[i].corrupted_span) {
      add(CheckCode::kUnchangedEdit, label(i) + " has identical original and corrupted spans");
    }
  }

  if (s.n_errors != static_cast<int>(s.errors.size())) {
    add(CheckCode::kEditCount, "n_errors is " + std::to_string(s.n_errors) + " but " +
                                   std::to_string(s.errors.size()) + " records are present");
  } else if (s.n_errors < 1 || s.n_errors > 3) {
    add(CheckCode::kEditCount, "n_errors must be 1, 2 or 3, got " + std::to_string(s.n_errors));
  }

  for (const auto& [name, text] : {std::pair<std::string_view, std::string_view>{
                                       "corrupted_text", s.corrupted_text},
                                   {"original_text", s.original_text}}) {
    const std::string problem = FormatProblem(text);
    if (!problem.empty()) add(CheckCode::kFormat, std::string(name) + ": " + problem);
  }

  for (size_t i = 0; i < s.errors.size(); ++i) {
    const ErrorRecord& e = s.errors[i];
    switch (e.error_type) {
      case ErrorType::kSideConfusion:
        if (!HasLateralityToken(e.original_span) || !HasLateralityToken(e.corrupted_span)) {
          add(CheckCode::kTypeIncoherent, label(i) + " is side confusion without a left/right token");
        }
        break;
      case ErrorType::kSpellingError: {
        const size_t d = EditDistance(e.original_span, e.corrupted_span);
        if (d > kMaxSpellingDistance) {
          add(CheckCode::kTypeIncoherent,
              label(i) + " is a spelling error with edit distance " + std::to_string(d));
        }
        break;
      }
      case ErrorType::kOmission:
        if (e.corrupted_span.size() >= e.original_span.size()) {
          add(CheckCode::kTypeIncoherent, label(i) + " is an omission but does not shorten the text");
        }
        break;
      case ErrorType::kInsertion:
        if (e.corrupted_span.size() <= e.original_span.size()) {
          add(CheckCode::kTypeIncoherent, label(i) + " is an insertion but does not lengthen the text");
        }
        break;
      case ErrorType::kOther:
        break;
    }
  }
  return out;
}

bool PassesStructuralChecks(const std::vector<QcFinding>& findings) {
  return std::none_of(findings.begin(), findings.end(),
                      [](const QcFinding& f) { return f.severity == Severity::kError; });
}

QcReport ValidateSamples(const std::vector<CorruptedSample>& samples) {
  const size_t workers = std::max(1u, std::thread::hardware_concurrency());
  auto all = OrderedParallelMap<std::vector<QcFinding>>(
      samples.size(), workers, [&](size_t i) { return ValidateSample(samples[i]); });
  QcReport report;
  report.total = samples.size();
  for (size_t i = 0; i < samples.size(); ++i) {
    if (all[i].empty()) {
      ++report.clean_count;
      continue;
    }
    std::array<bool, kNumCheckCodes> seen{};
    for (const QcFinding& f : all[i]) seen[Index(f.check_code)] = true;
    for (size_t c = 0; c < kNumCheckCodes; ++c) report.code_counts[c] += seen[c];
    report.flagged.push_back({samples[i].sample_id, i, std::move(all[i])});
  }
  return report;
}

QcReport ValidateCorpus(const std::filesystem::path& path, ReviewStore* store) {
  const ParsedDataset parsed =
      ParseDatasetText(ReadFileToString(path), ParseOptions{.lenient = true}, path.string());
  QcReport report = ValidateSamples(parsed.samples);
  for (const DatasetDefect& d : parsed.defects) {
    if (!d.sample_kept) report.unreadable.push_back(d);
  }
  if (store != nullptr) {
    for (const SampleFindings& sf : report.flagged) {
      store->Enqueue(parsed.samples[sf.index], sf.findings);
    }
  }
  return report;
}

namespace {

ordered_json FindingJson(const QcFinding& f) {
  ordered_json j;
  j["sample_id"] = f.sample_id;
  j["check_code"] = std::string(ToString(f.check_code));
  j["severity"] = std::string(ToString(f.severity));
  j["message"] = f.message;
  return j;
}

}  // namespace

ordered_json FindingsToJson(const std::vector<QcFinding>& findings) {
  ordered_json arr = ordered_json::array();
  for (const QcFinding& f : findings) arr.push_back(FindingJson(f));
  return arr;
}

std::string QcReportToJson(const QcReport& report) {
  ordered_json j;
  j["total"] = report.total;
  j["clean_count"] = report.clean_count;
  ordered_json counts;
  for (CheckCode c : kAllCheckCodes) counts[std::string(ToString(c))] = report.code_counts[Index(c)];
  j["code_counts"] = std::move(counts);
  ordered_json flagged = ordered_json::array();
  for (const SampleFindings& sf : report.flagged) {
    ordered_json item;
    item["sample_id"] = sf.sample_id;
    item["findings"] = FindingsToJson(sf.findings);
    flagged.push_back(std::move(item));
  }
  j["flagged"] = std::move(flagged);
  ordered_json unreadable = ordered_json::array();
  for (const DatasetDefect& d : report.unreadable) {
    unreadable.push_back({{"line", d.line}, {"field", d.field}, {"message", d.message}});
  }
  j["unreadable"] = std::move(unreadable);
  return j.dump(2);
}

}  // namespace reportfix

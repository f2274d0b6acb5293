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

#include "reportfix/forge/llm_injection.h"

#include <algorithm>

#include "json.hpp"
#include "reportfix/common/parallel.h"
#include "reportfix/common/strings.h"
#include "reportfix/report/dataset.h"

namespace reportfix {
namespace {

using nlohmann::json;

constexpr std::string_view kPromptHead =
    "You are helping build a training set for radiology report proofreading.\n"
    "Introduce exactly the requested errors into the report below. Error types:\n"
    "- omission: remove a clause or sentence\n"
    "- insertion: add one plausible but unsupported finding sentence\n"
    "- spelling error: misspell one word by one or two characters\n"
    "- side confusion: swap left and right in one place\n"
    "- other: change a unit or a punctuation mark\n"
    "Each edit must replace a span of the original report with a different span.\n"
    "For insertions and omissions include a neighbouring word in both spans so the\n"
    "original span is never empty. Edits must not overlap. Keep everything else\n"
    "byte-identical, including the section headers and line breaks.\n\n";

constexpr std::string_view kPromptTail =
    "Reply with exactly two blocks and nothing else:\n"
    "<corrupted_report>\n...the full corrupted report...\n</corrupted_report>\n"
    "<errors>\n"
    "[{\"error_type\": \"...\", \"original_span\": \"...\", \"corrupted_span\": \"...\", "
    "\"description\": \"...\"}]\n"
    "</errors>\n"
    "List edits in the order they appear in the report. If a corrupted_span occurs more\n"
    "than once in the corrupted report, add \"occurrence\": k for its 1-based index.\n";

std::string_view Block(std::string_view text, std::string_view tag) {
  const std::string open = "<" + std::string(tag) + ">";
  const std::string close = "</" + std::string(tag) + ">";
  const size_t b = text.find(open);
  if (b == std::string_view::npos) {
    throw InvalidInjectionResponse("missing " + open + " block");
  }
  const size_t e = text.find(close, b + open.size());
  if (e == std::string_view::npos) {
    throw InvalidInjectionResponse("missing " + close);
  }
  if (text.find(open, e) != std::string_view::npos) {
    throw InvalidInjectionResponse("more than one " + open + " block");
  }
  return text.substr(b + open.size(), e - b - open.size());
}

std::string TypeList(std::vector<ErrorType> types) {
  std::sort(types.begin(), types.end());
  std::string out;
  for (ErrorType t : types) {
    if (!out.empty()) out += ", ";
    out += ToString(t);
  }
  return out;
}

}  // namespace

std::string BuildInjectionPrompt(std::string_view original_text, const ErrorPlan& plan) {
  std::string prompt(kPromptHead);
  prompt += "Introduce " + std::to_string(plan.n_errors) +
            (plan.n_errors == 1 ? " error" : " independent errors") + " of these types:\n";
  for (ErrorType t : plan.types) prompt += "- " + std::string(ToString(t)) + "\n";
  prompt += "\nReport:\n<report>\n" + std::string(original_text) + "\n</report>\n\n";
  prompt += kPromptTail;
  return prompt;
}

CorruptedSample ParseInjectionResponse(std::string_view response, std::string_view original_text,
                                       const ErrorPlan& plan) {
  CorruptedSample s;
  s.original_text = std::string(original_text);
  s.corrupted_text = StripAsciiWhitespace(Block(response, "corrupted_report"));
  const json errors = json::parse(Block(response, "errors"), nullptr, false);
  if (errors.is_discarded() || !errors.is_array()) {
    throw InvalidInjectionResponse("<errors> must hold a JSON array");
  }
  for (size_t i = 0; i < errors.size(); ++i) {
    try {
      s.errors.push_back(ErrorRecordFromJson(errors[i], "errors[" + std::to_string(i) + "]"));
    } catch (const DatasetError& e) {
      throw InvalidInjectionResponse(e.what());
    }
  }
  s.n_errors = static_cast<int>(s.errors.size());
  if (s.n_errors != plan.n_errors) {
    throw InvalidInjectionResponse("expected " + std::to_string(plan.n_errors) +
                                   " errors, got " + std::to_string(s.n_errors));
  }
  std::vector<ErrorType> got;
  for (const auto& e : s.errors) got.push_back(e.error_type);
  if (TypeList(got) != TypeList(plan.types)) {
    throw InvalidInjectionResponse("expected error types [" + TypeList(plan.types) + "], got [" +
                                   TypeList(got) + "]");
  }
  const auto violations = CheckSample(s);
  if (!violations.empty()) {
    std::string complaint;
    for (const auto& v : violations) {
      if (!complaint.empty()) complaint += "; ";
      complaint += v.field + ": " + v.message;
    }
    throw InvalidInjectionResponse(complaint);
  }
  return s;
}

LlmInjectionError::LlmInjectionError(Kind kind, const std::string& message,
                                     std::vector<std::string> raw_responses, int attempts)
    : std::runtime_error(message),
      kind_(kind),
      raw_responses_(std::move(raw_responses)),
      attempts_(attempts) {}

LlmInjectionResult InjectLlm(std::string_view report_id, std::string_view original_text,
                             const ErrorPlan& plan, ChatClient& client,
                             const GenerationClientConfig& config) {
  ChatRequest request;
  request.model = config.model_name;
  request.temperature = config.temperature;
  request.messages.push_back({"user", BuildInjectionPrompt(original_text, plan)});

  std::vector<std::string> raw;
  std::string last_error;
  auto last_kind = LlmInjectionError::Kind::kTransport;
  const int max_attempts = 1 + std::max(0, config.max_retries);
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    std::string response;
    try {
      response = client.Complete(request);
    } catch (const TransportError& e) {
      last_error = e.what();
      last_kind = LlmInjectionError::Kind::kTransport;
      continue;
    }
    raw.push_back(response);
    try {
      CorruptedSample s = ParseInjectionResponse(response, original_text, plan);
      s.source_report_id = std::string(report_id);
      return {std::move(s), attempt};
    } catch (const InvalidInjectionResponse& e) {
      last_error = e.what();
      last_kind = LlmInjectionError::Kind::kInvalidResponse;
      request.messages.push_back({"assistant", response});
      request.messages.push_back(
          {"user", "Your answer was rejected: " + last_error +
                       "\nReply again with the two blocks, fixing this problem."});
    }
  }
  throw LlmInjectionError(last_kind,
                          "injection failed after " + std::to_string(max_attempts) +
                              " attempts: " + last_error,
                          std::move(raw), max_attempts);
}

LlmInjectionResult InjectLlm(const Report& report, const ErrorPlan& plan, ChatClient& client,
                             const GenerationClientConfig& config) {
  return InjectLlm(report.report_id, report.FlatText(), plan, client, config);
}

std::vector<LlmBatchItem> InjectLlmBatch(const std::vector<CleanReport>& reports,
                                         const std::vector<ErrorPlan>& plans, ChatClient& client,
                                         const GenerationClientConfig& config,
                                         size_t max_in_flight) {
  if (plans.size() != reports.size()) {
    throw std::invalid_argument("one plan per report is required");
  }
  return OrderedParallelMap<LlmBatchItem>(
      reports.size(), std::max<size_t>(1, max_in_flight), [&](size_t i) {
        LlmBatchItem item;
        try {
          item.result = InjectLlm(reports[i].report_id, reports[i].flat_text, plans[i], client,
                                  config);
          item.result->sample.split = reports[i].split;
        } catch (const LlmInjectionError& e) {
          item.error = e.what();
          item.raw_responses = e.raw_responses();
        }
        return item;
      });
}

}  // namespace reportfix

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

// Error injection through a text-generation endpoint. The generator is told
// which error types to introduce and must answer with the corrupted report in
// a <corrupted_report> block and a JSON list of edits in an <errors> block.

#ifndef REPORTFIX_FORGE_LLM_INJECTION_H_
#define REPORTFIX_FORGE_LLM_INJECTION_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reportfix/client/chat_client.h"
#include "reportfix/forge/injection.h"
#include "reportfix/report/sample.h"

namespace reportfix {

inline constexpr std::string_view kInjectionPromptVersion = "inject-v1";

std::string BuildInjectionPrompt(std::string_view original_text, const ErrorPlan& plan);

// Response failed to parse or the parsed sample broke an invariant. what()
// is the complaint sent back to the generator.
class InvalidInjectionResponse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses and validates one response against the original text and the plan.
CorruptedSample ParseInjectionResponse(std::string_view response, std::string_view original_text,
                                       const ErrorPlan& plan);

class LlmInjectionError : public std::runtime_error {
 public:
  enum class Kind { kTransport, kInvalidResponse };
  LlmInjectionError(Kind kind, const std::string& message, std::vector<std::string> raw_responses,
                    int attempts);
  Kind kind() const { return kind_; }
  // Every response received, in order, kept for audit.
  const std::vector<std::string>& raw_responses() const { return raw_responses_; }
  int attempts() const { return attempts_; }

 private:
  Kind kind_;
  std::vector<std::string> raw_responses_;
  int attempts_;
};

struct LlmInjectionResult {
  CorruptedSample sample;
  int attempts = 0;
};

// Makes up to 1 + config.max_retries calls. Each invalid response is followed
// by a re-prompt that appends the complaint. The returned sample has
// source_report_id set and an empty sample_id.
LlmInjectionResult InjectLlm(const Report& report, const ErrorPlan& plan, ChatClient& client,
                             const GenerationClientConfig& config);
LlmInjectionResult InjectLlm(std::string_view report_id, std::string_view original_text,
                             const ErrorPlan& plan, ChatClient& client,
                             const GenerationClientConfig& config);

struct LlmBatchItem {
  std::optional<LlmInjectionResult> result;
  std::string error;  // set when result is empty
  std::vector<std::string> raw_responses;
};

// Runs InjectLlm over all reports with at most max_in_flight concurrent
// requests. Output is in input order. The client must be thread safe.
std::vector<LlmBatchItem> InjectLlmBatch(const std::vector<CleanReport>& reports,
                                         const std::vector<ErrorPlan>& plans, ChatClient& client,
                                         const GenerationClientConfig& config,
                                         size_t max_in_flight);

}  // namespace reportfix

#endif  // REPORTFIX_FORGE_LLM_INJECTION_H_

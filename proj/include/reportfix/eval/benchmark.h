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

// Zero-shot benchmark of an external chat model: one request per sample,
// answers parsed from <answer> blocks.

#ifndef REPORTFIX_EVAL_BENCHMARK_H_
#define REPORTFIX_EVAL_BENCHMARK_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reportfix/client/chat_client.h"
#include "reportfix/eval/prediction.h"

namespace reportfix {

inline constexpr std::string_view kBenchPromptVersion = "bench-v1";

// Asks for two answer blocks: the comma-separated error types, then the full
// corrected report. `image_ref` adds an opaque image reference line.
std::string BuildBenchPrompt(std::string_view corrupted_text,
                             const std::optional<std::string>& image_ref = {});

// Types from the first answer block (separated by commas, semicolons or
// newlines; unknown labels dropped) and the corrected report from the
// second. Missing blocks leave the fields empty.
Prediction ParseBenchResponse(std::string_view sample_id, std::string_view raw_output);

struct BenchmarkConfig {
  std::string model_name = "model";
  double temperature = 0.0;
  int max_retries = 3;
  size_t concurrency_limit = 4;
  // "{id}" is replaced by the sample's source_report_id.
  std::optional<std::string> image_ref_template;
};

void ValidateBenchmarkConfig(const BenchmarkConfig& config);

// Predictions in input order. Transport failures are retried; once retries
// run out the prediction is empty and carries an error note.
std::vector<Prediction> RunBenchmark(ChatClient& client, const std::vector<CorruptedSample>& samples,
                                     const BenchmarkConfig& config);

}  // namespace reportfix

#endif  // REPORTFIX_EVAL_BENCHMARK_H_

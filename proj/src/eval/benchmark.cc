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

#include "reportfix/eval/benchmark.h"

#include <stdexcept>

#include "reportfix/common/parallel.h"
#include "reportfix/common/strings.h"
#include "reportfix/reward/rewards.h"

namespace reportfix {

std::string BuildBenchPrompt(std::string_view corrupted_text,
                             const std::optional<std::string>& image_ref) {
  std::string p;
  if (image_ref) p += "Image: " + *image_ref + "\n\n";
  p +=
      "The radiology report below contains one or more errors. Each error is one of: "
      "omission, insertion, spelling error, side confusion, other.\n"
      "First, identify the error types and write them, comma-separated, inside "
      "<answer></answer>. Then write the full corrected report inside a second "
      "<answer></answer> block.\n\nReport:\n";
  p += corrupted_text;
  p += "\n";
  return p;
}

Prediction ParseBenchResponse(std::string_view sample_id, std::string_view raw_output) {
  Prediction p;
  p.sample_id = std::string(sample_id);
  p.raw_output = std::string(raw_output);
  const std::vector<std::string> answers = ExtractAnswers(raw_output);
  if (!answers.empty()) {
    std::string label;
    auto flush = [&] {
      if (auto t = ParseErrorType(StripAsciiWhitespace(label))) p.predicted_types.push_back(*t);
      label.clear();
    };
    for (char c : answers[0]) {
      if (c == ',' || c == ';' || c == '\n') {
        flush();
      } else {
        label.push_back(c);
      }
    }
    flush();
  }
  if (answers.size() >= 2) p.corrected_text = answers[1];
  return p;
}

void ValidateBenchmarkConfig(const BenchmarkConfig& config) {
  if (config.max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (config.concurrency_limit == 0) throw std::invalid_argument("concurrency_limit must be >= 1");
  if (!(config.temperature >= 0)) throw std::invalid_argument("temperature must be >= 0");
}

std::vector<Prediction> RunBenchmark(ChatClient& client, const std::vector<CorruptedSample>& samples,
                                     const BenchmarkConfig& config) {
  ValidateBenchmarkConfig(config);
  return OrderedParallelMap<Prediction>(samples.size(), config.concurrency_limit, [&](size_t i) {
    const CorruptedSample& s = samples[i];
    std::optional<std::string> image_ref;
    if (config.image_ref_template) {
      image_ref = *config.image_ref_template;
      const size_t at = image_ref->find("{id}");
      if (at != std::string::npos) image_ref->replace(at, 4, s.source_report_id);
    }
    ChatRequest request{config.model_name,
                        {{"user", BuildBenchPrompt(s.corrupted_text, image_ref)}},
                        config.temperature};
    std::string last_error;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
      try {
        return ParseBenchResponse(s.sample_id, client.Complete(request));
      } catch (const TransportError& e) {
        last_error = e.what();
      }
    }
    Prediction failed;
    failed.sample_id = s.sample_id;
    failed.error_note = "transport failed after " + std::to_string(config.max_retries + 1) +
                        " attempts: " + last_error;
    return failed;
  });
}

}  // namespace reportfix

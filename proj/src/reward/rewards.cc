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

#include "reportfix/reward/rewards.h"

#include <regex>
#include <stdexcept>

#include "reportfix/common/strings.h"
#include "reportfix/reward/text_metrics.h"

namespace reportfix {
namespace {

constexpr std::string_view kAnswerOpen = "<answer>";
constexpr std::string_view kAnswerClose = "</answer>";

// Each block body is a run of characters that never starts one of the four
// tags, so a match implies exactly one block of each kind.
const std::regex& LayoutPattern() {
  static const std::regex pattern(
      R"(^\s*<think>((?:(?!</?think>|</?answer>)[\s\S])*)</think>\s*)"
      R"(<answer>((?:(?!</?think>|</?answer>)[\s\S])*)</answer>\s*$)",
      std::regex::ECMAScript | std::regex::optimize);
  return pattern;
}

// libstdc++'s regex executor recurses per character; refuse pathological
// lengths instead of risking the stack.
constexpr size_t kMaxRegexInput = 1 << 16;

}  // namespace

int FormatReward(std::string_view model_output) {
  if (model_output.size() > kMaxRegexInput) return 0;
  std::match_results<std::string_view::const_iterator> match;
  if (!std::regex_match(model_output.begin(), model_output.end(), match, LayoutPattern())) {
    return 0;
  }
  auto group = [&](int i) {
    return model_output.substr(static_cast<size_t>(match.position(i)),
                               static_cast<size_t>(match.length(i)));
  };
  const bool think_ok = !StripAsciiWhitespace(group(1)).empty();
  const bool answer_ok = !StripAsciiWhitespace(group(2)).empty();
  return think_ok && answer_ok ? 1 : 0;
}

std::vector<std::string> ExtractAnswers(std::string_view model_output) {
  std::vector<std::string> out;
  size_t from = 0;
  while (from < model_output.size()) {
    const size_t close = model_output.find(kAnswerClose, from);
    if (close == std::string_view::npos) break;
    const size_t open = model_output.rfind(kAnswerOpen, close);
    if (open != std::string_view::npos && open >= from) {
      const size_t body = open + kAnswerOpen.size();
      out.emplace_back(StripAsciiWhitespace(model_output.substr(body, close - body)));
    }
    from = close + kAnswerClose.size();
  }
  return out;
}

std::optional<std::string> ExtractAnswer(std::string_view model_output) {
  auto answers = ExtractAnswers(model_output);
  if (answers.empty()) return std::nullopt;
  return std::move(answers.front());
}

int AccuracyReward(std::optional<ErrorType> predicted, ErrorType truth) {
  return predicted && *predicted == truth ? 1 : 0;
}

int AccuracyReward(std::string_view predicted, ErrorType truth) {
  return AccuracyReward(ParseErrorType(predicted), truth);
}

StepReward ComputeStepReward(int step, std::string_view model_output, const StepGroundTruth& truth) {
  if (step < 1 || step > 3) {
    throw std::invalid_argument("step index must be 1, 2 or 3, got " + std::to_string(step));
  }
  StepReward r;
  r.format = FormatReward(model_output);
  const auto answer = ExtractAnswer(model_output);
  if (answer) {
    switch (step) {
      case 1:
        r.task = AccuracyReward(*answer, truth.error_type);
        break;
      case 2:
        r.task = Bleu(*answer, truth.description);
        break;
      case 3:
        r.task = Bleu(*answer, truth.corrected_text);
        break;
    }
  }
  r.total = r.format + r.task;
  return r;
}

}  // namespace reportfix

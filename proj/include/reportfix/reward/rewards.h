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

// Step rewards for the identify -> describe -> correct chain.

#ifndef REPORTFIX_REWARD_REWARDS_H_
#define REPORTFIX_REWARD_REWARDS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reportfix/report/error_type.h"

namespace reportfix {

// 1 iff the whole output is exactly one non-empty <think>...</think> block
// followed (optionally after whitespace) by exactly one non-empty
// <answer>...</answer> block, with nothing but whitespace around them.
int FormatReward(std::string_view model_output);

// Content of the first complete <answer>...</answer> block, trimmed. The
// block is closed by the first "</answer>" and opened by the nearest
// "<answer>" before it, so stray opening tags earlier in the text are skipped.
std::optional<std::string> ExtractAnswer(std::string_view model_output);

// Every complete answer block, in order.
std::vector<std::string> ExtractAnswers(std::string_view model_output);

// 1 iff `predicted` parses to a canonical label equal to `truth`.
int AccuracyReward(std::string_view predicted, ErrorType truth);
int AccuracyReward(std::optional<ErrorType> predicted, ErrorType truth);

struct StepReward {
  int format = 0;
  double task = 0.0;
  double total = 0.0;
};

struct StepGroundTruth {
  ErrorType error_type = ErrorType::kOther;
  std::string description;
  // Full corrected report (the original, clean text).
  std::string corrected_text;
};

// step 1: format + accuracy(answer, type); step 2: format + BLEU(answer,
// description); step 3: format + BLEU(answer, corrected report). A missing
// answer block gives task = 0. Throws std::invalid_argument for steps outside
// 1..3.
StepReward ComputeStepReward(int step, std::string_view model_output, const StepGroundTruth& truth);

}  // namespace reportfix

#endif  // REPORTFIX_REWARD_REWARDS_H_

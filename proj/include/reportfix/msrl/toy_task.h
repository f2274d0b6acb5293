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

// Desk-scale training task: short templated reports over a fixed vocabulary
// of under 64 tokens, one rule-injected error each, with templated
// descriptions. Every error type is recognizable from which words appear.

#ifndef REPORTFIX_MSRL_TOY_TASK_H_
#define REPORTFIX_MSRL_TOY_TASK_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "reportfix/msrl/policy.h"
#include "reportfix/msrl/trajectory.h"
#include "reportfix/report/sample.h"

namespace reportfix {

// Fixed description used as step-2 ground truth for each type.
std::string_view ToyDescription(ErrorType type);

// Types drawn uniformly. Sample i depends only on (seed, i).
std::vector<CorruptedSample> GenerateToyTask(uint64_t seed, size_t size);

// Every word a toy query, toy answer or instruction can contain.
Vocabulary ToyVocabulary(const StepTemplates& templates = {});

// The "<think> ... </think> <answer> ... </answer>" wrapper used everywhere.
std::string WrapAnswer(std::string_view answer);

struct FormatPriorConfig {
  size_t steps = 150;
  size_t batch_size = 8;
  double learning_rate = 0.05;
  uint64_t seed = 0;
  bool single_step = false;
};

// Supervised warm start that teaches the output format and the report
// language but not the task: demonstrations pair each query with a random
// type label, a random description and an unrelated report. Returns the
// final mean token log-likelihood.
double PretrainFormatPrior(Policy& policy, const FormatPriorConfig& config,
                           const StepTemplates& templates = {});

}  // namespace reportfix

#endif  // REPORTFIX_MSRL_TOY_TASK_H_

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

// Step queries for the three-step identify / describe / correct chain. Each
// query after the first is the previous query, the chosen previous output and
// the next instruction, joined by newlines.

#ifndef REPORTFIX_MSRL_TRAJECTORY_H_
#define REPORTFIX_MSRL_TRAJECTORY_H_

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reportfix/msrl/policy.h"

namespace reportfix {

inline constexpr int kNumSteps = 3;

struct StepTemplates {
  std::string version = "steps-v1";
  std::array<std::string, kNumSteps> instructions = {
      "identify the error type", "describe the error", "correct the report"};
  // Used by the single-step ablation: one answer "TYPE | DESCRIPTION | REPORT".
  std::string single_step_instruction = "identify type | describe | correct";
};

struct StepQuery {
  int step_index = 1;
  std::string text;
  std::shared_ptr<const StepQuery> prev;
  std::string prev_output;  // chosen output of the previous step
};

// Step 1: the report inside <report> tags, preceded by an opaque image
// reference line when given, then the step-1 instruction.
std::shared_ptr<const StepQuery> BuildInitialQuery(std::string_view report_text,
                                                   const StepTemplates& templates,
                                                   const std::optional<std::string>& image_ref = {});

// Step k > 1 from its lineage. Throws std::invalid_argument when k is out of
// range or the previous query is missing or not step k - 1.
std::shared_ptr<const StepQuery> BuildStepQuery(int k, std::shared_ptr<const StepQuery> prev,
                                                std::string_view chosen_prev_output,
                                                const StepTemplates& templates);

std::shared_ptr<const StepQuery> BuildSingleStepQuery(std::string_view report_text,
                                                      const StepTemplates& templates,
                                                      const std::optional<std::string>& image_ref = {});

struct Trajectory {
  std::vector<std::shared_ptr<const StepQuery>> queries;
  std::vector<StepOutput> outputs;
};

}  // namespace reportfix

#endif  // REPORTFIX_MSRL_TRAJECTORY_H_

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

#include "reportfix/msrl/trajectory.h"

#include <stdexcept>

namespace reportfix {
namespace {

std::string ReportBlock(std::string_view report_text, const std::optional<std::string>& image_ref) {
  std::string text;
  if (image_ref) text += "image " + *image_ref + "\n";
  text += std::string(kReportOpen) + "\n" + std::string(report_text) + "\n" +
          std::string(kReportClose) + "\n";
  return text;
}

}  // namespace

std::shared_ptr<const StepQuery> BuildInitialQuery(std::string_view report_text,
                                                   const StepTemplates& templates,
                                                   const std::optional<std::string>& image_ref) {
  auto q = std::make_shared<StepQuery>();
  q->step_index = 1;
  q->text = ReportBlock(report_text, image_ref) + templates.instructions[0];
  return q;
}

std::shared_ptr<const StepQuery> BuildStepQuery(int k, std::shared_ptr<const StepQuery> prev,
                                                std::string_view chosen_prev_output,
                                                const StepTemplates& templates) {
  if (k < 2 || k > kNumSteps) throw std::invalid_argument("step index must be 2 or 3 here");
  if (!prev) throw std::invalid_argument("step " + std::to_string(k) + " needs its lineage");
  if (prev->step_index != k - 1) {
    throw std::invalid_argument("previous query is step " + std::to_string(prev->step_index));
  }
  auto q = std::make_shared<StepQuery>();
  q->step_index = k;
  q->text = prev->text + "\n" + std::string(chosen_prev_output) + "\n" +
            templates.instructions[static_cast<size_t>(k - 1)];
  q->prev = std::move(prev);
  q->prev_output = std::string(chosen_prev_output);
  return q;
}

std::shared_ptr<const StepQuery> BuildSingleStepQuery(std::string_view report_text,
                                                      const StepTemplates& templates,
                                                      const std::optional<std::string>& image_ref) {
  auto q = std::make_shared<StepQuery>();
  q->step_index = 1;
  q->text = ReportBlock(report_text, image_ref) + templates.single_step_instruction;
  return q;
}

}  // namespace reportfix

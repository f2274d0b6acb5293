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

// Multi-step GRPO training loop and a matching evaluator.

#ifndef REPORTFIX_MSRL_TRAINER_H_
#define REPORTFIX_MSRL_TRAINER_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "reportfix/msrl/grpo.h"
#include "reportfix/msrl/policy.h"
#include "reportfix/msrl/trajectory.h"
#include "reportfix/report/sample.h"
#include "reportfix/reward/rewards.h"

namespace reportfix {

enum class TrainMode { kMsrl, kSingleStepRl };

std::string_view ToString(TrainMode mode);
// Accepts "msrl" and "single_step_rl".
std::optional<TrainMode> ParseTrainMode(std::string_view text);

struct TrainConfig {
  GrpoConfig grpo;
  size_t batch_size = 16;
  TrainMode mode = TrainMode::kMsrl;
  // Condition step k > 1 on the ground-truth previous answer instead of the
  // best sampled output.
  bool teacher_forced_context = false;
  StepTemplates templates;
  std::optional<std::string> image_ref;
  // Concurrent sample rollouts within a batch; 0 picks the hardware count.
  size_t workers = 0;
  // Keep the trajectories of the last batch in the result.
  bool keep_last_trajectories = false;
};

void ValidateTrainConfig(const TrainConfig& config);

struct StepMetrics {
  size_t step = 0;
  // Per chain step (k = 1..3). In single-step mode index 0 holds the whole
  // reward and the task entries hold accuracy, description BLEU and report
  // BLEU of the single answer.
  std::array<double, kNumSteps> mean_reward{};
  std::array<double, kNumSteps> mean_task{};
  std::array<double, kNumSteps> mean_format{};
  double mean_kl = 0;
  double clip_fraction = 0;
  double objective = 0;
};

nlohmann::json StepMetricsToJson(const StepMetrics& m);

class TrainingDivergedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainResult {
  std::vector<StepMetrics> metrics;
  std::vector<Trajectory> last_trajectories;
};

// Builds the ground truth a single-error sample provides to the rewards.
// Throws std::invalid_argument for samples with n_errors != 1.
StepGroundTruth GroundTruthFor(const CorruptedSample& sample);

// Single-step reward: format + accuracy(type) + BLEU(description) +
// BLEU(report) over an answer "TYPE | DESCRIPTION | REPORT". `parts`
// receives the three task terms when non-null.
double SingleStepReward(std::string_view output, const StepGroundTruth& truth,
                        std::array<double, kNumSteps>* parts = nullptr, int* format = nullptr);

// Trains `policy` in place. The reference policy is `reference` when given,
// otherwise a frozen copy taken on entry; the old policy is re-cloned once per optimization step. Calls
// `on_step` after every update when set. Throws std::invalid_argument for an
// empty dataset or multi-error samples and TrainingDivergedError for a
// non-finite objective.
TrainResult TrainMsrl(const std::vector<CorruptedSample>& dataset, Policy& policy,
                      const TrainConfig& config,
                      const std::function<void(const StepMetrics&)>& on_step = {},
                      const Policy* reference = nullptr);

struct EvalSummary {
  std::array<double, kNumSteps> mean_reward{};
  std::array<double, kNumSteps> mean_task{};
  std::array<double, kNumSteps> mean_format{};
  size_t samples = 0;
};

// Runs the same rollout chain as training, without updates, over every
// sample; means are taken over all group outputs.
EvalSummary EvaluatePolicy(const Policy& policy, const std::vector<CorruptedSample>& samples,
                           const TrainConfig& config, uint64_t seed);

}  // namespace reportfix

#endif  // REPORTFIX_MSRL_TRAINER_H_

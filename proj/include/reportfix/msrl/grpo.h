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

// Group-relative policy optimization pieces: advantage normalization, the
// per-token KL estimate, the clipped surrogate objective and its gradient.

#ifndef REPORTFIX_MSRL_GRPO_H_
#define REPORTFIX_MSRL_GRPO_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "reportfix/msrl/policy.h"

namespace reportfix {

struct GrpoConfig {
  size_t group_size = 8;
  double epsilon = 0.2;
  double beta = 0.04;
  double learning_rate = 0.02;
  size_t max_new_tokens = 64;
  size_t steps = 300;
  uint64_t seed = 0;
  double std_guard = 1e-8;
  double temperature = 1.0;
};

// Throws std::invalid_argument naming the offending field.
void ValidateGrpoConfig(const GrpoConfig& config);

// (r_i - mean) / (sample std + guard).
std::vector<double> ComputeAdvantages(std::span<const double> rewards, double std_guard = 1e-8);

// exp(d) - d - 1 with d = logp_ref - logp_theta.
double KlPenalty(double logp_theta, double logp_ref);

struct GroupRollout {
  int step_index = 1;
  std::string query;
  std::vector<StepOutput> outputs;
  std::vector<double> rewards;
  std::vector<double> advantages;
  std::vector<std::vector<double>> logp_old;
  std::vector<std::vector<double>> logp_ref;
};

// Samples G outputs from the frozen old policy and stores their
// log-probabilities. Rewards, advantages and logp_ref are left to the caller.
GroupRollout RolloutGroup(const Policy& policy_old, int step_index, const std::string& query,
                          const GrpoConfig& config, uint64_t seed);

// Fills logp_ref by scoring every output under `reference`.
void ScoreReference(const Policy& reference, GroupRollout& rollout);

struct ObjectiveStats {
  double objective = 0;
  double mean_kl = 0;        // over tokens
  double clip_fraction = 0;  // tokens whose clipped branch is active
  size_t tokens = 0;
};

// Per token: min(ratio * A, clip(ratio) * A) - beta * KlPenalty, with
// ratio = exp(logp_current - logp_old). Tokens are averaged within each output
// and outputs averaged over the group. When `grad` is non-empty,
// scale * d(objective)/d(params) is added to it.
ObjectiveStats GrpoStepObjective(const GroupRollout& rollout, const Policy& policy,
                                 const GrpoConfig& config, std::span<double> grad = {},
                                 double scale = 1.0);

class AdamOptimizer {
 public:
  explicit AdamOptimizer(size_t size, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  // Gradient ascent step on `params`.
  void Ascend(std::span<double> params, std::span<const double> grad, double learning_rate);
  uint64_t steps() const { return t_; }

 private:
  double beta1_, beta2_, eps_;
  std::vector<double> m_, v_;
  uint64_t t_ = 0;
};

}  // namespace reportfix

#endif  // REPORTFIX_MSRL_GRPO_H_

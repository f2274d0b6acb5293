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

#include "reportfix/msrl/grpo.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace reportfix {

void ValidateGrpoConfig(const GrpoConfig& c) {
  if (c.group_size < 2) throw std::invalid_argument("group_size must be >= 2");
  if (!(c.epsilon > 0 && c.epsilon < 1)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(c.beta >= 0)) throw std::invalid_argument("beta must be >= 0");
  if (!(c.learning_rate > 0)) throw std::invalid_argument("learning_rate must be positive");
  if (c.max_new_tokens == 0) throw std::invalid_argument("max_new_tokens must be positive");
  if (!(c.std_guard > 0)) throw std::invalid_argument("std_guard must be positive");
  if (!(c.temperature >= 0)) throw std::invalid_argument("temperature must be >= 0");
}

std::vector<double> ComputeAdvantages(std::span<const double> rewards, double std_guard) {
  const size_t n = rewards.size();
  if (n < 2) throw std::invalid_argument("advantages need at least two rewards");
  // The rounded mean of equal values can differ from them by an ulp, which the
  // guard would blow up to ~1e-8.
  if (std::all_of(rewards.begin(), rewards.end(), [&](double r) { return r == rewards[0]; })) {
    return std::vector<double>(n, 0.0);
  }
  const double mean = std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double ss = 0;
  for (double r : rewards) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  std::vector<double> adv(n);
  for (size_t i = 0; i < n; ++i) adv[i] = (rewards[i] - mean) / (sd + std_guard);
  return adv;
}

double KlPenalty(double logp_theta, double logp_ref) {
  const double d = logp_ref - logp_theta;
  return std::expm1(d) - d;
}

GroupRollout RolloutGroup(const Policy& policy_old, int step_index, const std::string& query,
                          const GrpoConfig& config, uint64_t seed) {
  GroupRollout r;
  r.step_index = step_index;
  r.query = query;
  r.outputs = policy_old.Sample(query, config.group_size, seed,
                                SampleOptions{config.max_new_tokens, config.temperature});
  for (const StepOutput& o : r.outputs) r.logp_old.push_back(o.logprobs);
  return r;
}

void ScoreReference(const Policy& reference, GroupRollout& rollout) {
  rollout.logp_ref.clear();
  for (const StepOutput& o : rollout.outputs) {
    rollout.logp_ref.push_back(reference.Score(rollout.query, o.tokens));
  }
}

ObjectiveStats GrpoStepObjective(const GroupRollout& rollout, const Policy& policy,
                                 const GrpoConfig& config, std::span<double> grad, double scale) {
  const size_t g = rollout.outputs.size();
  if (g == 0 || rollout.advantages.size() != g || rollout.logp_old.size() != g ||
      rollout.logp_ref.size() != g) {
    throw std::invalid_argument("rollout is not fully populated");
  }
  ObjectiveStats stats;
  double kl_sum = 0;
  size_t clipped = 0;
  std::vector<double> coeffs;
  for (size_t i = 0; i < g; ++i) {
    const auto& tokens = rollout.outputs[i].tokens;
    const size_t n = tokens.size();
    if (rollout.logp_old[i].size() != n || rollout.logp_ref[i].size() != n) {
      throw std::invalid_argument("stored log-probabilities do not match the output tokens");
    }
    if (n == 0) continue;
    const std::vector<double> current = policy.Score(rollout.query, tokens);
    const double a = rollout.advantages[i];
    const double weight = 1.0 / (static_cast<double>(g) * static_cast<double>(n));
    coeffs.assign(n, 0.0);
    double sum = 0;
    for (size_t t = 0; t < n; ++t) {
      const double ratio = std::exp(current[t] - rollout.logp_old[i][t]);
      const double clipped_ratio = std::clamp(ratio, 1 - config.epsilon, 1 + config.epsilon);
      const double unclipped_term = ratio * a;
      const double clipped_term = clipped_ratio * a;
      const double kl = KlPenalty(current[t], rollout.logp_ref[i][t]);
      sum += std::min(unclipped_term, clipped_term) - config.beta * kl;
      kl_sum += kl;
      // d/dlogp of the surrogate: ratio * A on the unclipped branch, 0 once
      // the clipped constant is the minimum.
      double d = 0;
      if (unclipped_term <= clipped_term) {
        d = unclipped_term;
      } else {
        ++clipped;
      }
      // d/dlogp of -beta * (exp(ref - cur) - (ref - cur) - 1).
      d += config.beta * std::expm1(rollout.logp_ref[i][t] - current[t]);
      coeffs[t] = scale * weight * d;
    }
    stats.objective += sum * weight;
    stats.tokens += n;
    if (!grad.empty()) policy.AccumulateGradient(rollout.query, tokens, coeffs, grad);
  }
  if (stats.tokens > 0) {
    stats.mean_kl = kl_sum / static_cast<double>(stats.tokens);
    stats.clip_fraction = static_cast<double>(clipped) / static_cast<double>(stats.tokens);
  }
  return stats;
}

AdamOptimizer::AdamOptimizer(size_t size, double beta1, double beta2, double eps)
    : beta1_(beta1), beta2_(beta2), eps_(eps), m_(size, 0.0), v_(size, 0.0) {}

void AdamOptimizer::Ascend(std::span<double> params, std::span<const double> grad,
                           double learning_rate) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("optimizer size mismatch");
  }
  ++t_;
  const double c1 = 1 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1 - beta2_) * grad[i] * grad[i];
    params[i] += learning_rate * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

}  // namespace reportfix

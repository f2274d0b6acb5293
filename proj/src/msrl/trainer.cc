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

#include "reportfix/msrl/trainer.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "reportfix/common/parallel.h"
#include "reportfix/common/random.h"
#include "reportfix/common/strings.h"
#include "reportfix/msrl/toy_task.h"
#include "reportfix/reward/text_metrics.h"

namespace reportfix {
namespace {

uint64_t RolloutSeed(uint64_t seed, size_t step, size_t b, int k) {
  return SplitMix64(SplitMix64(SplitMix64(seed) + step) + b * kNumSteps + static_cast<size_t>(k));
}

struct ChainResult {
  std::vector<GroupRollout> groups;
  Trajectory trajectory;
  std::array<double, kNumSteps> reward{};
  std::array<double, kNumSteps> task{};
  std::array<double, kNumSteps> format{};
};

void Finish(GroupRollout& g, const Policy* reference, double std_guard) {
  g.advantages = ComputeAdvantages(g.rewards, std_guard);
  if (reference) ScoreReference(*reference, g);
}

ChainResult RunChain(const Policy& sampler, const Policy* reference, const CorruptedSample& sample,
                     const TrainConfig& config, size_t step, size_t b) {
  const StepGroundTruth truth = GroundTruthFor(sample);
  const GrpoConfig& grpo = config.grpo;
  const double g_size = static_cast<double>(grpo.group_size);
  ChainResult out;

  if (config.mode == TrainMode::kSingleStepRl) {
    auto q = BuildSingleStepQuery(sample.corrupted_text, config.templates, config.image_ref);
    GroupRollout g = RolloutGroup(sampler, 1, q->text, grpo, RolloutSeed(grpo.seed, step, b, 1));
    for (const StepOutput& o : g.outputs) {
      std::array<double, kNumSteps> parts{};
      int format = 0;
      g.rewards.push_back(SingleStepReward(o.text, truth, &parts, &format));
      out.reward[0] += g.rewards.back() / g_size;
      out.format[0] += format / g_size;
      for (int k = 0; k < kNumSteps; ++k) out.task[k] += parts[k] / g_size;
    }
    Finish(g, reference, grpo.std_guard);
    const size_t best = std::max_element(g.rewards.begin(), g.rewards.end()) - g.rewards.begin();
    out.trajectory.queries.push_back(q);
    out.trajectory.outputs.push_back(g.outputs[best]);
    out.groups.push_back(std::move(g));
    return out;
  }

  std::shared_ptr<const StepQuery> query;
  std::string context;
  for (int k = 1; k <= kNumSteps; ++k) {
    query = k == 1 ? BuildInitialQuery(sample.corrupted_text, config.templates, config.image_ref)
                   : BuildStepQuery(k, query, context, config.templates);
    GroupRollout g = RolloutGroup(sampler, k, query->text, grpo, RolloutSeed(grpo.seed, step, b, k));
    for (const StepOutput& o : g.outputs) {
      const StepReward r = ComputeStepReward(k, o.text, truth);
      g.rewards.push_back(r.total);
      out.reward[k - 1] += r.total / g_size;
      out.task[k - 1] += r.task / g_size;
      out.format[k - 1] += r.format / g_size;
    }
    Finish(g, reference, grpo.std_guard);
    const size_t best = std::max_element(g.rewards.begin(), g.rewards.end()) - g.rewards.begin();
    if (config.teacher_forced_context) {
      context = WrapAnswer(k == 1 ? std::string(ToString(truth.error_type)) : truth.description);
    } else {
      context = g.outputs[best].text;
    }
    out.trajectory.queries.push_back(query);
    out.trajectory.outputs.push_back(g.outputs[best]);
    out.groups.push_back(std::move(g));
  }
  return out;
}

size_t Workers(const TrainConfig& config) {
  if (config.workers > 0) return config.workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

std::string_view ToString(TrainMode mode) {
  return mode == TrainMode::kMsrl ? "msrl" : "single_step_rl";
}

std::optional<TrainMode> ParseTrainMode(std::string_view text) {
  if (text == "msrl") return TrainMode::kMsrl;
  if (text == "single_step_rl") return TrainMode::kSingleStepRl;
  return std::nullopt;
}

void ValidateTrainConfig(const TrainConfig& config) {
  ValidateGrpoConfig(config.grpo);
  if (config.batch_size == 0) throw std::invalid_argument("batch_size must be positive");
}

nlohmann::json StepMetricsToJson(const StepMetrics& m) {
  nlohmann::ordered_json j;
  j["step"] = m.step;
  for (int k = 0; k < kNumSteps; ++k) {
    j["mean_reward_k" + std::to_string(k + 1)] = m.mean_reward[k];
  }
  j["mean_kl"] = m.mean_kl;
  j["clip_fraction"] = m.clip_fraction;
  for (int k = 0; k < kNumSteps; ++k) j["mean_task_k" + std::to_string(k + 1)] = m.mean_task[k];
  for (int k = 0; k < kNumSteps; ++k) {
    j["mean_format_k" + std::to_string(k + 1)] = m.mean_format[k];
  }
  j["objective"] = m.objective;
  return j;
}

StepGroundTruth GroundTruthFor(const CorruptedSample& sample) {
  if (sample.n_errors != 1 || sample.errors.size() != 1) {
    throw std::invalid_argument("sample " + sample.sample_id + " has " +
                                std::to_string(sample.n_errors) +
                                " errors; training needs single-error samples");
  }
  return StepGroundTruth{sample.errors[0].error_type, sample.errors[0].description,
                         sample.original_text};
}

double SingleStepReward(std::string_view output, const StepGroundTruth& truth,
                        std::array<double, kNumSteps>* parts, int* format) {
  const int f = FormatReward(output);
  std::array<double, kNumSteps> p{};
  if (const auto answer = ExtractAnswer(output)) {
    std::vector<std::string> fields;
    std::stringstream ss(*answer);
    std::string field;
    while (std::getline(ss, field, '|')) fields.push_back(std::string(StripAsciiWhitespace(field)));
    if (fields.size() > 0) p[0] = AccuracyReward(fields[0], truth.error_type);
    if (fields.size() > 1) p[1] = Bleu(fields[1], truth.description);
    if (fields.size() > 2) p[2] = Bleu(fields[2], truth.corrected_text);
  }
  if (parts) *parts = p;
  if (format) *format = f;
  return f + p[0] + p[1] + p[2];
}

TrainResult TrainMsrl(const std::vector<CorruptedSample>& dataset, Policy& policy,
                      const TrainConfig& config,
                      const std::function<void(const StepMetrics&)>& on_step,
                      const Policy* reference) {
  ValidateTrainConfig(config);
  if (dataset.empty()) throw std::invalid_argument("training dataset is empty");
  for (const CorruptedSample& s : dataset) GroundTruthFor(s);

  std::unique_ptr<Policy> own_reference;
  if (!reference) {
    own_reference = policy.Clone();
    reference = own_reference.get();
  }
  AdamOptimizer adam(policy.parameters().size());
  std::vector<double> grad(policy.parameters().size());
  TrainResult result;
  const size_t workers = Workers(config);
  const double inv_batch = 1.0 / static_cast<double>(config.batch_size);

  for (size_t step = 0; step < config.grpo.steps; ++step) {
    const std::unique_ptr<Policy> old = policy.Clone();
    Rng pick(config.grpo.seed ^ 0xb47c4ULL, step);
    std::vector<size_t> batch(config.batch_size);
    for (size_t& i : batch) i = pick.Index(dataset.size());

    std::vector<ChainResult> chains = OrderedParallelMap<ChainResult>(
        batch.size(), workers, [&](size_t b) {
          return RunChain(*old, reference, dataset[batch[b]], config, step, b);
        });

    StepMetrics m;
    m.step = step + 1;
    std::fill(grad.begin(), grad.end(), 0.0);
    double kl_weighted = 0, clip_weighted = 0;
    size_t tokens = 0;
    for (const ChainResult& c : chains) {
      for (int k = 0; k < kNumSteps; ++k) {
        m.mean_reward[k] += c.reward[k] * inv_batch;
        m.mean_task[k] += c.task[k] * inv_batch;
        m.mean_format[k] += c.format[k] * inv_batch;
      }
      for (const GroupRollout& g : c.groups) {
        const ObjectiveStats s = GrpoStepObjective(g, policy, config.grpo, grad, inv_batch);
        m.objective += s.objective * inv_batch;
        kl_weighted += s.mean_kl * static_cast<double>(s.tokens);
        clip_weighted += s.clip_fraction * static_cast<double>(s.tokens);
        tokens += s.tokens;
      }
    }
    if (tokens > 0) {
      m.mean_kl = kl_weighted / static_cast<double>(tokens);
      m.clip_fraction = clip_weighted / static_cast<double>(tokens);
    }
    const bool grad_finite =
        std::all_of(grad.begin(), grad.end(), [](double g) { return std::isfinite(g); });
    if (!std::isfinite(m.objective) || !grad_finite) {
      throw TrainingDivergedError("non-finite objective at step " + std::to_string(m.step) +
                                  ": objective=" + std::to_string(m.objective) +
                                  " mean_kl=" + std::to_string(m.mean_kl) +
                                  " finite_gradient=" + (grad_finite ? "yes" : "no"));
    }
    adam.Ascend(policy.parameters(), grad, config.grpo.learning_rate);
    result.metrics.push_back(m);
    if (on_step) on_step(m);
    if (config.keep_last_trajectories && step + 1 == config.grpo.steps) {
      for (ChainResult& c : chains) result.last_trajectories.push_back(std::move(c.trajectory));
    }
  }
  return result;
}

EvalSummary EvaluatePolicy(const Policy& policy, const std::vector<CorruptedSample>& samples,
                           const TrainConfig& config, uint64_t seed) {
  TrainConfig eval_config = config;
  eval_config.grpo.seed = seed;
  std::vector<ChainResult> chains = OrderedParallelMap<ChainResult>(
      samples.size(), Workers(config),
      [&](size_t i) { return RunChain(policy, nullptr, samples[i], eval_config, 0, i); });
  EvalSummary out;
  out.samples = samples.size();
  if (samples.empty()) return out;
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (const ChainResult& c : chains) {
    for (int k = 0; k < kNumSteps; ++k) {
      out.mean_reward[k] += c.reward[k] * inv;
      out.mean_task[k] += c.task[k] * inv;
      out.mean_format[k] += c.format[k] * inv;
    }
  }
  return out;
}

}  // namespace reportfix

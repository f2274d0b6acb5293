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

// Trainable generative policies. Policy is the interface the GRPO trainer
// uses; LogLinearPolicy is a small autoregressive log-linear model that runs
// comfortably on a CPU.

#ifndef REPORTFIX_MSRL_POLICY_H_
#define REPORTFIX_MSRL_POLICY_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "reportfix/msrl/vocabulary.h"

namespace reportfix {

struct SampleOptions {
  size_t max_new_tokens = 64;
  // 0 selects the most likely token (ties by lowest id).
  double temperature = 1.0;
};

struct StepOutput {
  std::vector<int> tokens;
  std::string text;  // Decode(tokens)
  // Log-probabilities of each token under the policy at temperature 1.
  std::vector<double> logprobs;
  bool truncated = false;  // hit max_new_tokens before the stop token
};

class Policy {
 public:
  virtual ~Policy() = default;

  virtual const Vocabulary& vocab() const = 0;

  // n independent samples; output i uses the stream Rng(seed, i). Generation
  // stops after the "</answer>" token.
  virtual std::vector<StepOutput> Sample(const std::string& query, size_t n, uint64_t seed,
                                         const SampleOptions& options) const = 0;

  // Per-token log-probabilities of `tokens` given `query`.
  virtual std::vector<double> Score(const std::string& query,
                                    const std::vector<int>& tokens) const = 0;

  // grad += sum_t coeffs[t] * d logp(tokens[t]) / d params.
  virtual void AccumulateGradient(const std::string& query, const std::vector<int>& tokens,
                                  std::span<const double> coeffs,
                                  std::span<double> grad) const = 0;

  // Independent copy; used for the frozen old and reference policies.
  virtual std::unique_ptr<Policy> Clone() const = 0;

  virtual std::span<double> parameters() = 0;
  virtual std::span<const double> parameters() const = 0;
};

struct LogLinearConfig {
  size_t hash_buckets = 1 << 14;
  // Uniform init in [-init_scale, init_scale]; 0 gives a uniform policy.
  double init_scale = 0.0;
  uint64_t init_seed = 0;
};

// Features, each hashed into one of `hash_buckets` rows of a |V|-wide weight
// table, are conjoined with a step key (hash of the last three query tokens):
//   bias; previous token; previous two tokens; previous token x each distinct
//   query token; position inside the answer block.
// Two candidate-dependent copy features add scalar weights per step key:
//   "v is the next token of the query's <report> block after the current
//   alignment point" and "the block is exhausted and v is </answer>". The
//   alignment point advances monotonically as the answer reproduces block
//   tokens.
class LogLinearPolicy : public Policy {
 public:
  LogLinearPolicy(Vocabulary vocab, LogLinearConfig config);

  const Vocabulary& vocab() const override { return vocab_; }
  std::vector<StepOutput> Sample(const std::string& query, size_t n, uint64_t seed,
                                 const SampleOptions& options) const override;
  std::vector<double> Score(const std::string& query,
                            const std::vector<int>& tokens) const override;
  void AccumulateGradient(const std::string& query, const std::vector<int>& tokens,
                          std::span<const double> coeffs, std::span<double> grad) const override;
  std::unique_ptr<Policy> Clone() const override;
  std::span<double> parameters() override { return params_; }
  std::span<const double> parameters() const override { return params_; }

  const LogLinearConfig& config() const { return config_; }

  static constexpr size_t kCopySlots = 16;
  static constexpr size_t kCopyKinds = 2;

 private:
  friend class LogLinearSession;
  Vocabulary vocab_;
  LogLinearConfig config_;
  std::vector<double> params_;
};

// Binary snapshot: vocabulary, config and parameters.
void SavePolicy(const LogLinearPolicy& policy, const std::filesystem::path& path);
LogLinearPolicy LoadPolicy(const std::filesystem::path& path);

}  // namespace reportfix

#endif  // REPORTFIX_MSRL_POLICY_H_

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

// Command-line configuration: one JSON file with a global part and a section
// per command. Unknown keys and ill-typed values are collected and reported
// together.

#ifndef REPORTFIX_TOOLS_CLI_RUN_CONFIG_H_
#define REPORTFIX_TOOLS_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "reportfix/client/chat_client.h"
#include "reportfix/eval/benchmark.h"
#include "reportfix/eval/scorer.h"
#include "reportfix/forge/injection.h"
#include "reportfix/msrl/grpo.h"
#include "reportfix/msrl/trainer.h"

namespace reportfix::cli {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct SynthSection {
  std::string mode = "rules";            // rules | llm
  std::optional<std::string> input;      // clean reports; generated when absent
  size_t count = 1000;                   // generated clean reports
  InjectionConfig injection;
  int max_replans = 16;
  GenerationClientConfig client;
  size_t concurrency = 4;
};

struct ValidateSection {
  std::optional<std::string> input;
  std::optional<std::string> store;  // review store to enqueue flagged samples
};

struct TrainSection {
  std::string task = "toy";  // toy | dataset
  std::optional<std::string> dataset_path;
  TrainMode mode = TrainMode::kMsrl;
  GrpoConfig grpo;
  bool seed_set = false;  // train.seed given; otherwise the global seed
  size_t batch_size = 16;
  size_t toy_size = 2000;
  size_t eval_size = 100;
  size_t prior_steps = 150;
  size_t hash_buckets = 1 << 14;
  bool teacher_forced_context = false;
  size_t workers = 0;
  std::optional<std::string> image_ref;
  std::optional<std::string> init_policy;
};

struct EvalSection {
  std::optional<std::string> dataset;
  std::optional<std::string> predictions;
  bool identity = false;  // score the ground truth against itself
  std::vector<ScorerSpec> scorers;
  size_t workers = 1;
};

struct BenchSection {
  std::optional<std::string> dataset;
  GenerationClientConfig client;
  BenchmarkConfig bench;
};

struct ServeSection {
  std::string host = "127.0.0.1";
  int port = 8876;
  std::optional<std::string> store;
};

struct RunConfig {
  uint64_t seed = 0;
  std::string log_level = "info";
  std::string out_dir = "out";
  SynthSection synth;
  ValidateSection validate;
  TrainSection train;
  EvalSection eval;
  BenchSection bench;
  ServeSection serve;
};

// Throws ConfigError listing every problem.
RunConfig ParseRunConfig(const nlohmann::json& j);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Semantic checks shared by file values and flag overrides. Throws
// ConfigError listing every problem.
void CheckRunConfig(const RunConfig& config);

}  // namespace reportfix::cli

#endif  // REPORTFIX_TOOLS_CLI_RUN_CONFIG_H_

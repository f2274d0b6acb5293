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

// The reportfix subcommands. Each returns a process exit status and throws
// on failure; main() turns exceptions into a structured error report.

#ifndef REPORTFIX_TOOLS_CLI_COMMANDS_H_
#define REPORTFIX_TOOLS_CLI_COMMANDS_H_

#include "tools/cli/run_config.h"

namespace reportfix::cli {

// Writes <out>/dataset.jsonl.
int RunSynth(const RunConfig& config);
// Writes <out>/qc_report.json.
int RunValidate(const RunConfig& config);
// Writes <out>/policy_init.bin, <out>/policy.bin, <out>/metrics.jsonl and
// <out>/train_summary.json.
int RunTrain(const RunConfig& config);
// Writes the detection and correction tables and <out>/eval_summary.json.
int RunEval(const RunConfig& config);
// Writes <out>/predictions.jsonl.
int RunBench(const RunConfig& config);
// Blocks until SIGINT or SIGTERM.
int RunServe(const RunConfig& config);

// Missing or unusable input named by the user.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace reportfix::cli

#endif  // REPORTFIX_TOOLS_CLI_COMMANDS_H_

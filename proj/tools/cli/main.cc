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

#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "tools/cli/commands.h"
#include "tools/cli/run_config.h"

namespace {

using reportfix::cli::ConfigError;
using reportfix::cli::RunConfig;

struct CommonFlags {
  std::optional<std::string> config;
  std::optional<uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> log_level;
};

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--seed", f.seed, "Global seed");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--log-level", f.log_level, "trace|debug|info|warn|error|off");
}

template <typename T, typename U>
void Override(const std::optional<T>& flag, U& target) {
  if (flag) target = *flag;
}

int ReportError(const std::string& command, const char* type,
                const std::vector<std::string>& problems) {
  nlohmann::ordered_json j;
  j["error"]["command"] = command;
  j["error"]["type"] = type;
  j["error"]["problems"] = problems;
  std::cerr << j.dump() << std::endl;
  return std::string_view(type) == "config" ? 2 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic report-error corpora, multi-step RL training and evaluation",
               "reportfix"};
  app.require_subcommand(1);
  CommonFlags common;

  // Per-command flag overrides, applied after the config file is loaded.
  std::function<void(RunConfig&)> apply = [](RunConfig&) {};
  std::function<int(const RunConfig&)> run;

  // synth
  std::optional<std::string> synth_mode, synth_input;
  std::optional<size_t> synth_count;
  CLI::App* synth = app.add_subcommand("synth", "Inject errors into clean reports");
  AddCommon(synth, common);
  synth->add_option("--mode", synth_mode, "rules|llm");
  synth->add_option("--input", synth_input, "Clean reports (JSONL); generated when absent");
  synth->add_option("--count", synth_count, "Number of generated clean reports");
  synth->callback([&] {
    apply = [&](RunConfig& c) {
      Override(synth_mode, c.synth.mode);
      if (synth_input) c.synth.input = synth_input;
      Override(synth_count, c.synth.count);
    };
    run = reportfix::cli::RunSynth;
  });

  // validate
  std::optional<std::string> validate_input, validate_store;
  CLI::App* validate = app.add_subcommand("validate", "Run quality checks over a dataset");
  AddCommon(validate, common);
  validate->add_option("--input", validate_input, "Dataset (JSONL)");
  validate->add_option("--store", validate_store, "Review store directory for flagged samples");
  validate->callback([&] {
    apply = [&](RunConfig& c) {
      if (validate_input) c.validate.input = validate_input;
      if (validate_store) c.validate.store = validate_store;
    };
    run = reportfix::cli::RunValidate;
  });

  // train
  std::optional<std::string> train_task, train_mode, train_dataset, train_init;
  std::optional<size_t> train_steps;
  CLI::App* train = app.add_subcommand("train", "Train a policy with group-relative RL");
  AddCommon(train, common);
  train->add_option("--task", train_task, "toy|dataset");
  train->add_option("--mode", train_mode, "msrl|single_step_rl");
  train->add_option("--steps", train_steps, "Optimization steps");
  train->add_option("--dataset", train_dataset, "Training dataset for --task dataset");
  train->add_option("--init-policy", train_init, "Start from a saved policy snapshot");
  train->callback([&] {
    apply = [&](RunConfig& c) {
      Override(train_task, c.train.task);
      if (train_mode) {
        const auto mode = reportfix::ParseTrainMode(*train_mode);
        if (!mode) throw ConfigError({"--mode: must be msrl or single_step_rl"});
        c.train.mode = *mode;
      }
      Override(train_steps, c.train.grpo.steps);
      if (train_dataset) {
        c.train.dataset_path = train_dataset;
        if (!train_task) c.train.task = "dataset";
      }
      if (train_init) c.train.init_policy = train_init;
    };
    run = reportfix::cli::RunTrain;
  });

  // eval
  std::optional<std::string> eval_dataset, eval_predictions;
  std::optional<size_t> eval_workers;
  bool eval_identity = false;
  CLI::App* eval = app.add_subcommand("eval", "Score predictions against a dataset");
  AddCommon(eval, common);
  eval->add_option("--dataset", eval_dataset, "Ground-truth dataset (JSONL)");
  eval->add_option("--predictions", eval_predictions, "Predictions (JSONL)");
  eval->add_flag("--identity", eval_identity, "Score the ground truth against itself");
  eval->add_option("--workers", eval_workers, "Concurrent scorer calls");
  eval->callback([&] {
    apply = [&](RunConfig& c) {
      if (eval_dataset) c.eval.dataset = eval_dataset;
      if (eval_predictions) c.eval.predictions = eval_predictions;
      if (eval_identity) c.eval.identity = true;
      Override(eval_workers, c.eval.workers);
    };
    run = reportfix::cli::RunEval;
  });

  // bench
  std::optional<std::string> bench_dataset;
  std::optional<size_t> bench_concurrency;
  CLI::App* bench = app.add_subcommand("bench", "Query a chat model on every sample");
  AddCommon(bench, common);
  bench->add_option("--dataset", bench_dataset, "Dataset (JSONL)");
  bench->add_option("--concurrency", bench_concurrency, "Requests in flight");
  bench->callback([&] {
    apply = [&](RunConfig& c) {
      if (bench_dataset) c.bench.dataset = bench_dataset;
      Override(bench_concurrency, c.bench.bench.concurrency_limit);
    };
    run = reportfix::cli::RunBench;
  });

  // serve
  std::optional<std::string> serve_store, serve_host;
  std::optional<int> serve_port;
  CLI::App* serve = app.add_subcommand("serve", "Serve the review API");
  AddCommon(serve, common);
  serve->add_option("--port", serve_port, "Port (default 8876; 0 picks a free one)");
  serve->add_option("--host", serve_host, "Bind address");
  serve->add_option("--store", serve_store, "Review store directory");
  serve->callback([&] {
    apply = [&](RunConfig& c) {
      Override(serve_port, c.serve.port);
      Override(serve_host, c.serve.host);
      if (serve_store) c.serve.store = serve_store;
    };
    run = reportfix::cli::RunServe;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const std::string name =
        app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
    return ReportError(name, "config", {e.what()});
  }
  const std::string command = app.get_subcommands().front()->get_name();

  auto logger = spdlog::stderr_color_mt("reportfix");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%H:%M:%S.%e] [%^%l%$] %v");

  try {
    RunConfig config = common.config ? reportfix::cli::LoadRunConfig(*common.config) : RunConfig{};
    if (common.seed) {
      config.seed = *common.seed;
      config.synth.injection.seed = *common.seed;
      if (!config.train.seed_set) config.train.grpo.seed = *common.seed;
    }
    Override(common.out, config.out_dir);
    Override(common.log_level, config.log_level);
    apply(config);
    reportfix::cli::CheckRunConfig(config);
    spdlog::set_level(spdlog::level::from_str(config.log_level));
    return run(config);
  } catch (const ConfigError& e) {
    return ReportError(command, "config", e.problems());
  } catch (const reportfix::cli::InputError& e) {
    return ReportError(command, "input", {e.what()});
  } catch (const std::exception& e) {
    return ReportError(command, "runtime", {e.what()});
  }
}

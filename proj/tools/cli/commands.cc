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

#include "tools/cli/commands.h"

#include <signal.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <thread>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "reportfix/common/random.h"
#include "reportfix/eval/correction_metrics.h"
#include "reportfix/eval/detection.h"
#include "reportfix/eval/tables.h"
#include "reportfix/forge/llm_injection.h"
#include "reportfix/msrl/policy.h"
#include "reportfix/msrl/toy_task.h"
#include "reportfix/qc/review_server.h"
#include "reportfix/qc/review_store.h"
#include "reportfix/qc/validate.h"
#include "reportfix/report/dataset.h"

namespace reportfix::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

fs::path OutDir(const RunConfig& c) {
  fs::path dir(c.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

const std::string& Require(const std::optional<std::string>& v, const char* what) {
  if (!v) throw InputError(std::string(what) + " is required");
  return *v;
}

void WriteJson(const fs::path& path, const ordered_json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<CorruptedSample> LoadSamples(const std::string& path) {
  if (!fs::exists(path)) throw InputError("no such file: " + path);
  return ParseDataset(path).samples;
}

ordered_json Optional(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json EvalToJson(const EvalSummary& e) {
  ordered_json j;
  for (int k = 0; k < kNumSteps; ++k) {
    const std::string n = std::to_string(k + 1);
    j["mean_reward_k" + n] = e.mean_reward[k];
    j["mean_task_k" + n] = e.mean_task[k];
    j["mean_format_k" + n] = e.mean_format[k];
  }
  j["samples"] = e.samples;
  return j;
}

ordered_json OverallToJson(const MetricsTable& t) {
  ordered_json j;
  for (size_t m = 0; m < t.metrics.size(); ++m) {
    j[t.metrics[m]] = t.rows.empty() ? ordered_json(nullptr) : Optional(t.rows[0].values[m]);
  }
  j["pairs"] = t.rows.empty() ? 0 : t.rows[0].n;
  j["fallbacks"] = t.fallback_count;
  return j;
}

}  // namespace

int RunSynth(const RunConfig& c) {
  const SynthSection& s = c.synth;
  std::vector<CleanReport> reports;
  if (s.input) {
    if (!fs::exists(*s.input)) throw InputError("no such file: " + *s.input);
    reports = ParseCleanReports(*s.input);
  } else {
    reports = GenerateCleanReports(c.seed, s.count);
  }
  spdlog::info("synth: {} clean reports, mode {}", reports.size(), s.mode);

  std::vector<CorruptedSample> samples;
  size_t failed = 0;
  if (s.mode == "rules") {
    SynthesisStats stats;
    samples = SynthesizeRuleBased(reports, s.injection, {}, s.max_replans, &stats);
    failed = stats.skipped_reports;
    spdlog::info("synth: {} re-plans, {} reports without a usable site", stats.replans,
                 stats.skipped_reports);
  } else {
    std::vector<ErrorPlan> plans;
    for (size_t i = 0; i < reports.size(); ++i) {
      Rng rng(s.injection.seed, i);
      plans.push_back(SampleErrorPlan(s.injection, rng));
    }
    HttpChatClient client(s.client);
    const auto items = InjectLlmBatch(reports, plans, client, s.client, s.concurrency);
    std::ofstream failures(OutDir(c) / "synth_failures.jsonl", std::ios::trunc);
    for (size_t i = 0; i < items.size(); ++i) {
      if (!items[i].result) {
        ++failed;
        failures << ordered_json{{"report_id", reports[i].report_id},
                                 {"error", items[i].error},
                                 {"raw_responses", items[i].raw_responses}}
                        .dump()
                 << "\n";
        continue;
      }
      CorruptedSample sample = items[i].result->sample;
      char id[32];
      std::snprintf(id, sizeof(id), "s%06zu", i);
      sample.sample_id = id;
      sample.split = reports[i].split;
      samples.push_back(std::move(sample));
    }
    if (failed) spdlog::warn("synth: {} reports failed; see synth_failures.jsonl", failed);
  }
  const fs::path out = OutDir(c) / "dataset.jsonl";
  WriteDataset(out, samples);
  std::cout << ordered_json{{"output", out.string()}, {"samples", samples.size()},
                            {"failed_reports", failed}}
                   .dump()
            << std::endl;
  return 0;
}

int RunValidate(const RunConfig& c) {
  const std::string& input = Require(c.validate.input, "validate.input (--input)");
  if (!fs::exists(input)) throw InputError("no such file: " + input);
  std::unique_ptr<ReviewStore> store;
  if (c.validate.store) store = std::make_unique<ReviewStore>(*c.validate.store);
  const QcReport report = ValidateCorpus(input, store.get());
  const fs::path out = OutDir(c) / "qc_report.json";
  {
    std::ofstream f(out, std::ios::trunc);
    f << QcReportToJson(report) << "\n";
    if (!f) throw std::runtime_error("write failed: " + out.string());
  }
  spdlog::info("validate: {} of {} samples clean", report.clean_count, report.total);
  std::cout << ordered_json{{"output", out.string()},
                            {"total", report.total},
                            {"clean_count", report.clean_count},
                            {"flagged", report.flagged.size()},
                            {"unreadable", report.unreadable.size()}}
                   .dump()
            << std::endl;
  return 0;
}

int RunTrain(const RunConfig& c) {
  const TrainSection& t = c.train;
  TrainConfig tc;
  tc.grpo = t.grpo;
  tc.batch_size = t.batch_size;
  tc.mode = t.mode;
  tc.teacher_forced_context = t.teacher_forced_context;
  tc.image_ref = t.image_ref;
  tc.workers = t.workers;
  const uint64_t seed = t.grpo.seed;

  std::vector<CorruptedSample> data, held_out;
  std::unique_ptr<LogLinearPolicy> policy;
  if (t.task == "toy") {
    data = GenerateToyTask(SplitMix64(seed), t.toy_size);
    held_out = GenerateToyTask(SplitMix64(seed + 1), t.eval_size);
  } else {
    size_t dropped = 0;
    for (CorruptedSample& s : LoadSamples(Require(t.dataset_path, "train.dataset_path"))) {
      if (s.n_errors != 1) {
        ++dropped;
      } else if (s.split == Split::kTest) {
        if (held_out.size() < t.eval_size) held_out.push_back(std::move(s));
      } else {
        data.push_back(std::move(s));
      }
    }
    if (dropped) spdlog::info("train: skipped {} multi-error samples", dropped);
  }
  if (data.empty()) throw InputError("training set is empty");

  if (t.init_policy) {
    policy = std::make_unique<LogLinearPolicy>(LoadPolicy(*t.init_policy));
  } else if (t.task == "toy") {
    policy = std::make_unique<LogLinearPolicy>(ToyVocabulary(tc.templates),
                                               LogLinearConfig{t.hash_buckets, 0.0, seed});
    FormatPriorConfig prior;
    prior.steps = t.prior_steps;
    prior.seed = seed;
    prior.single_step = t.mode == TrainMode::kSingleStepRl;
    const double ll = PretrainFormatPrior(*policy, prior, tc.templates);
    spdlog::info("train: format warm start, {} steps, mean token log-likelihood {:.3f}",
                 t.prior_steps, ll);
  } else {
    std::vector<std::string> texts;
    for (const auto& s : data) {
      texts.push_back(s.original_text);
      texts.push_back(s.corrupted_text);
      for (const auto& e : s.errors) texts.push_back(e.description);
    }
    for (ErrorType e : kAllErrorTypes) texts.emplace_back(ToString(e));
    for (const auto& i : tc.templates.instructions) texts.push_back(i);
    texts.push_back(tc.templates.single_step_instruction);
    texts.emplace_back("| checking the report");
    policy = std::make_unique<LogLinearPolicy>(BuildVocabulary(texts, 4096),
                                               LogLinearConfig{t.hash_buckets, 0.0, seed});
  }

  const fs::path out = OutDir(c);
  SavePolicy(*policy, out / "policy_init.bin");
  const EvalSummary before =
      held_out.empty() ? EvalSummary{} : EvaluatePolicy(*policy, held_out, tc, seed + 7);

  std::ofstream metrics(out / "metrics.jsonl", std::ios::trunc);
  if (!metrics) throw std::runtime_error("cannot write metrics.jsonl");
  TrainMsrl(data, *policy, tc, [&](const StepMetrics& m) {
    metrics << StepMetricsToJson(m).dump() << "\n";
    metrics.flush();
    if (m.step % 25 == 0 || m.step == tc.grpo.steps) {
      spdlog::info("step {}: reward k1 {:.3f} k2 {:.3f} k3 {:.3f}, kl {:.4f}", m.step,
                   m.mean_reward[0], m.mean_reward[1], m.mean_reward[2], m.mean_kl);
    }
  });
  SavePolicy(*policy, out / "policy.bin");
  const EvalSummary after =
      held_out.empty() ? EvalSummary{} : EvaluatePolicy(*policy, held_out, tc, seed + 7);

  ordered_json summary;
  summary["task"] = t.task;
  summary["mode"] = std::string(ToString(t.mode));
  summary["steps"] = tc.grpo.steps;
  summary["train_samples"] = data.size();
  summary["initial"] = EvalToJson(before);
  summary["final"] = EvalToJson(after);
  WriteJson(out / "train_summary.json", summary);
  std::cout << summary.dump() << std::endl;
  return 0;
}

int RunEval(const RunConfig& c) {
  const auto truth = LoadSamples(Require(c.eval.dataset, "eval.dataset (--dataset)"));
  std::vector<Prediction> preds;
  if (c.eval.identity) {
    preds = IdentityPredictions(truth);
  } else {
    const std::string& path = Require(c.eval.predictions, "eval.predictions (--predictions)");
    if (!fs::exists(path)) throw InputError("no such file: " + path);
    preds = ReadPredictions(path);
  }
  std::vector<std::unique_ptr<SubprocessScorer>> owned;
  std::vector<Scorer*> scorers;
  for (const ScorerSpec& spec : c.eval.scorers) {
    owned.push_back(std::make_unique<SubprocessScorer>(spec));
    scorers.push_back(owned.back().get());
  }
  MetricOptions options;
  options.workers = c.eval.workers;
  const DetectionScores detection = ComputeDetectionScores(preds, truth);
  const MetricsTable report = ReportLevelMetrics(preds, truth, scorers, options);
  const MetricsTable sentence = SentenceLevelMetrics(preds, truth, scorers, options);
  for (const auto& note : report.notes) spdlog::info("eval: {}", note);
  const fs::path out = OutDir(c);
  EmitTables(detection, report, sentence, out);

  ordered_json summary;
  summary["samples"] = truth.size();
  summary["macro_precision"] = Optional(detection.macro_precision);
  summary["macro_recall"] = Optional(detection.macro_recall);
  summary["report_level"] = OverallToJson(report);
  summary["sentence_level"] = OverallToJson(sentence);
  WriteJson(out / "eval_summary.json", summary);
  std::cout << summary.dump() << std::endl;
  return 0;
}

int RunBench(const RunConfig& c) {
  const auto samples = LoadSamples(Require(c.bench.dataset, "bench.dataset (--dataset)"));
  HttpChatClient client(c.bench.client);
  const auto preds = RunBenchmark(client, samples, c.bench.bench);
  size_t failed = 0;
  for (const auto& p : preds) failed += p.error_note.has_value();
  if (failed) spdlog::warn("bench: {} requests failed after retries", failed);
  const fs::path out = OutDir(c) / "predictions.jsonl";
  WritePredictions(out, preds);
  std::cout << ordered_json{{"output", out.string()}, {"predictions", preds.size()},
                            {"failed", failed}}
                   .dump()
            << std::endl;
  return 0;
}

int RunServe(const RunConfig& c) {
  const std::string& dir = Require(c.serve.store, "serve.store (--store)");
  // Block the stop signals before any thread starts so that only the waiter
  // below receives them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  ReviewStore store(dir);
  ReviewServer server(store);
  const int port = server.Bind(c.serve.host, c.serve.port);
  if (port < 0) {
    throw InputError("cannot bind " + c.serve.host + ":" + std::to_string(c.serve.port));
  }
  spdlog::info("serve: review API on http://{}:{} (store {})", c.serve.host, port, dir);
  std::cout << ordered_json{{"host", c.serve.host}, {"port", port}}.dump() << std::endl;
  std::jthread waiter([&] {
    int sig = 0;
    sigwait(&stop_signals, &sig);
    spdlog::info("serve: signal {}, shutting down", sig);
    server.Stop();
  });
  server.Serve();
  // Serve() can also return on its own; wake the waiter in that case.
  if (waiter.joinable()) pthread_kill(waiter.native_handle(), SIGTERM);
  store.WriteSnapshot();
  return 0;
}

}  // namespace reportfix::cli

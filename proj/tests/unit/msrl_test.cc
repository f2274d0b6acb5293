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

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "grad_check.h"
#include "reportfix/common/random.h"
#include "reportfix/common/strings.h"
#include "reportfix/msrl/grpo.h"
#include "reportfix/msrl/policy.h"
#include "reportfix/msrl/toy_task.h"
#include "reportfix/msrl/trainer.h"
#include "reportfix/msrl/trajectory.h"
#include "reportfix/msrl/vocabulary.h"
#include "reportfix/qc/validate.h"
#include "temp_dir.h"

namespace reportfix {
namespace {

double SampleStd(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (v.size() - 1));
}

TEST_CASE("policy tokenization keeps tags whole") {
  CHECK(SplitPolicyTokens("<think>a,b</think>\n<answer> x.</answer>") ==
        std::vector<std::string>{"<think>", "a", ",", "b", "</think>", "<answer>", "x", ".",
                                 "</answer>"});
  CHECK(SplitPolicyTokens("<other> tag") == std::vector<std::string>{"<", "other", ">", "tag"});
  const Vocabulary v({"a", "b", "a"});
  CHECK(v.size() == Vocabulary::kNumReserved + 2);
  CHECK(v.Encode("a zz b") == std::vector<int>{7, Vocabulary::kUnk, 8});
  CHECK(v.Decode(v.Encode("<answer> a b </answer>")) == "<answer> a b </answer>");
  const Vocabulary built = BuildVocabulary({"x y y z z z"}, Vocabulary::kNumReserved + 2);
  CHECK(built.tokens().back() == "y");
}

TEST_CASE("advantage examples") {
  SUBCASE("constant group") {
    for (double v : {1.0, 0.1, 1.2345678, -3.3}) {
      const std::vector<double> r(8, v);
      for (double a : ComputeAdvantages(r)) CHECK(a == 0.0);
    }
  }
  SUBCASE("two winners out of eight") {
    const std::vector<double> r = {1, 1, 0, 0, 0, 0, 0, 0};
    const double sd = std::sqrt(0.75 * 0.25 * 8.0 / 7.0);
    CHECK(sd == doctest::Approx(0.4629).epsilon(1e-4));
    const auto a = ComputeAdvantages(r);
    CHECK(a[0] == doctest::Approx(0.75 / sd).epsilon(1e-7));
    CHECK(a[0] == doctest::Approx(1.620).epsilon(1e-3));
    CHECK(a[5] == doctest::Approx(-0.540).epsilon(1e-3));
  }
  SUBCASE("fewer than two rewards") {
    CHECK_THROWS_AS(ComputeAdvantages(std::vector<double>{1.0}), std::invalid_argument);
  }
}

TEST_CASE("advantage invariants over random groups") {
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> r(8);
    for (double& x : r) x = rng.Bernoulli(0.3) ? std::round(rng.Uniform() * 2) : rng.Uniform() * 2;
    const auto a = ComputeAdvantages(r);
    const double mean = std::accumulate(a.begin(), a.end(), 0.0) / 8;
    CHECK(std::abs(mean) < 1e-9);
    if (SampleStd(r) > 100 * 1e-8) CHECK(std::abs(SampleStd(a) - 1) < 1e-6);
    std::vector<double> shifted = r;
    const double shift = rng.Uniform() * 10 - 5;
    for (double& x : shifted) x += shift;
    const auto as = ComputeAdvantages(shifted);
    for (size_t i = 0; i < 8; ++i) CHECK(std::abs(as[i] - a[i]) < 1e-9);
    std::vector<double> scaled = r;
    const double c = 0.1 + rng.Uniform() * 10;
    for (double& x : scaled) x *= c;
    const auto ac = ComputeAdvantages(scaled);
    CHECK(std::max_element(ac.begin(), ac.end()) - ac.begin() ==
          std::max_element(r.begin(), r.end()) - r.begin());
    CHECK(std::max_element(a.begin(), a.end()) - a.begin() ==
          std::max_element(r.begin(), r.end()) - r.begin());
    if (SampleStd(r) > 1e-3) {
      for (size_t i = 0; i < 8; ++i) CHECK(std::abs(ac[i] - a[i]) < 1e-6);
    }
  }
}

TEST_CASE("kl penalty") {
  CHECK(KlPenalty(-1.3, -1.3) == 0.0);
  CHECK(KlPenalty(-2.0, -2.0 + std::log(2.0)) ==
        doctest::Approx(2.0 - std::log(2.0) - 1.0).epsilon(1e-12));
  CHECK(KlPenalty(-0.5, -4.0) >= 0.0);
  CHECK(KlPenalty(-4.0, -0.5) >= 0.0);

  // Monte-Carlo mean of the per-token estimate against the exact KL of two
  // categorical distributions.
  const std::vector<double> p = {0.5, 0.3, 0.15, 0.05};
  const std::vector<double> q = {0.25, 0.25, 0.25, 0.25};
  double exact = 0;
  for (size_t i = 0; i < p.size(); ++i) exact += p[i] * std::log(p[i] / q[i]);
  Rng rng(3);
  double sum = 0;
  const int n = 200000;
  for (int s = 0; s < n; ++s) {
    const size_t x = rng.Categorical(p);
    sum += KlPenalty(std::log(p[x]), std::log(q[x]));
  }
  CHECK(std::abs(sum / n - exact) / exact < 0.05);
}

TEST_CASE("grpo objective at the old policy") {
  const LogLinearPolicy old = testing::TinyPolicy(5);
  const LogLinearPolicy ref = testing::TinyPolicy(6);
  GrpoConfig config;
  config.max_new_tokens = 8;
  GroupRollout r = RolloutGroup(old, 1, "<report> a b </report> c", config, 9);
  CHECK(r.outputs.size() == 8);
  Rng rng(1);
  for (size_t i = 0; i < 8; ++i) r.rewards.push_back(rng.Uniform());
  r.advantages = ComputeAdvantages(r.rewards);

  SUBCASE("beta = 0") {
    ScoreReference(ref, r);
    config.beta = 0;
    CHECK(std::abs(GrpoStepObjective(r, old, config).objective) < 1e-12);
  }
  SUBCASE("reference equal to old, any beta") {
    ScoreReference(old, r);
    config.beta = 0.7;
    const auto stats = GrpoStepObjective(r, old, config);
    CHECK(std::abs(stats.objective) < 1e-12);
    CHECK(stats.mean_kl == 0.0);
    CHECK(stats.clip_fraction == 0.0);
  }
  SUBCASE("shape mismatch") {
    ScoreReference(ref, r);
    r.logp_old[0].push_back(0.0);
    CHECK_THROWS_AS(GrpoStepObjective(r, old, config), std::invalid_argument);
  }
}

TEST_CASE("grpo gradient matches finite differences") {
  CHECK(testing::TinyPolicy(0).parameters().size() <= 500);
  for (double beta : {0.0, 0.04}) {
    for (uint64_t seed = 0; seed < 5; ++seed) {
      CAPTURE(beta);
      CAPTURE(seed);
      const auto r = testing::GrpoGradientCheck(seed, beta, 1e-3);
      CHECK(r.near_boundary_tokens == 0);
      CHECK(r.max_rel_error < 1e-4);
    }
  }
}

TEST_CASE("grpo gradient with active clipping") {
  size_t clipped = 0;
  for (uint64_t seed = 10; seed < 15; ++seed) {
    const auto r = testing::GrpoGradientCheck(seed, 0.04, 0.4);
    if (r.near_boundary_tokens > 0) continue;
    clipped += r.clipped_tokens;
    CHECK(r.max_rel_error < 1e-4);
  }
  CHECK(clipped > 0);
}

TEST_CASE("sampling determinism and truncation") {
  const LogLinearPolicy p = testing::TinyPolicy(3);
  const std::string q = "<report> a b </report> c";
  const auto a = p.Sample(q, 8, 42, SampleOptions{6, 1.0});
  const auto b = p.Sample(q, 8, 42, SampleOptions{6, 1.0});
  REQUIRE(a.size() == 8);
  bool any_truncated = false;
  for (size_t i = 0; i < 8; ++i) {
    CHECK(a[i].tokens == b[i].tokens);
    CHECK(a[i].logprobs == b[i].logprobs);
    CHECK(a[i].tokens.size() <= 6);
    CHECK(a[i].text == p.vocab().Decode(a[i].tokens));
    CHECK(a[i].truncated == (a[i].tokens.empty() || a[i].tokens.back() != Vocabulary::kAnswerCloseId));
    any_truncated |= a[i].truncated;
    const auto scored = p.Score(q, a[i].tokens);
    for (size_t t = 0; t < scored.size(); ++t) CHECK(scored[t] == doctest::Approx(a[i].logprobs[t]));
    for (int tok : a[i].tokens) {
      CHECK(tok != Vocabulary::kUnk);
      CHECK(tok != Vocabulary::kReportOpenId);
    }
  }
  CHECK(any_truncated);
  CHECK(p.Sample(q, 8, 43, SampleOptions{6, 1.0})[0].tokens != a[0].tokens);
}

TEST_CASE("greedy sampling collapses the group") {
  const LogLinearPolicy p = testing::TinyPolicy(4);
  GrpoConfig config;
  config.temperature = 0;
  config.max_new_tokens = 10;
  GroupRollout r = RolloutGroup(p, 1, "<report> a </report> b", config, 1);
  for (const auto& o : r.outputs) CHECK(o.tokens == r.outputs[0].tokens);
  for (const auto& o : r.outputs) r.rewards.push_back(static_cast<double>(o.tokens.size()));
  for (double a : ComputeAdvantages(r.rewards)) CHECK(a == 0.0);
}

TEST_CASE("step queries") {
  const StepTemplates t;
  const std::string report = "Findings: There is a small left effusion.";
  auto q1 = BuildInitialQuery(report, t);
  CHECK(q1->step_index == 1);
  CHECK(q1->text.find(report) != std::string::npos);
  CHECK(q1->text.find(t.instructions[0]) != std::string::npos);
  CHECK(BuildInitialQuery(report, t, std::string("img-17.png"))->text.find("img-17.png") !=
        std::string::npos);

  const std::string o1 = "<think> checking the report </think> <answer> omission </answer>";
  auto q2 = BuildStepQuery(2, q1, o1, t);
  CHECK(q2->text == q1->text + "\n" + o1 + "\n" + t.instructions[1]);
  CHECK(q2->prev == q1);

  const std::string o2 = "<think> checking the report </think> <answer> a sentence was removed </answer>";
  auto q3 = BuildStepQuery(3, q2, o2, t);
  for (const std::string& piece : {q1->text, o1, t.instructions[1], o2, t.instructions[2]}) {
    CAPTURE(piece);
    CHECK(CountOccurrences(q3->text, piece) == 1);
  }
  CHECK(q3->text.find(q1->text) < q3->text.find(o1));
  CHECK(q3->text.find(o1) < q3->text.find(o2));

  CHECK_THROWS_AS(BuildStepQuery(2, nullptr, o1, t), std::invalid_argument);
  CHECK_THROWS_AS(BuildStepQuery(3, q1, o1, t), std::invalid_argument);
  CHECK_THROWS_AS(BuildStepQuery(4, q2, o1, t), std::invalid_argument);
  CHECK_THROWS_AS(BuildStepQuery(1, q1, o1, t), std::invalid_argument);
}

TEST_CASE("toy task generator") {
  CHECK(GenerateToyTask(1, 0).empty());
  CHECK(ToyVocabulary().size() <= 64);

  const auto samples = GenerateToyTask(9, 1000);
  CHECK(samples == GenerateToyTask(9, 1000));
  CHECK(GenerateToyTask(9, 10) == std::vector<CorruptedSample>(samples.begin(), samples.begin() + 10));
  const Vocabulary vocab = ToyVocabulary();
  for (const auto& s : samples) {
    CAPTURE(s.sample_id);
    CHECK(ValidateSample(s).empty());
    CHECK(s.n_errors == 1);
    CHECK(s.errors[0].description == ToyDescription(s.errors[0].error_type));
    const auto ids = vocab.Encode(s.original_text);
    CHECK(std::count(ids.begin(), ids.end(), Vocabulary::kUnk) == 0);
  }

  const auto big = GenerateToyTask(10, 10000);
  std::array<size_t, kNumErrorTypes> counts{};
  for (const auto& s : big) counts[Index(s.errors[0].error_type)]++;
  for (size_t c : counts) CHECK(std::abs(c / 10000.0 - 0.2) <= 0.02);
}

TEST_CASE("single-step reward") {
  const StepGroundTruth truth{ErrorType::kOmission, "a sentence was removed", "Findings: ok."};
  std::array<double, kNumSteps> parts{};
  int format = 0;
  const double r = SingleStepReward(
      WrapAnswer("omission | a sentence was removed | Findings: ok."), truth, &parts, &format);
  CHECK(format == 1);
  CHECK(parts[0] == 1.0);
  CHECK(parts[1] == doctest::Approx(1.0));
  CHECK(parts[2] == doctest::Approx(1.0));
  CHECK(r == doctest::Approx(4.0));
  CHECK(SingleStepReward(WrapAnswer("insertion"), truth) == 1.0);
  CHECK(SingleStepReward("no tags", truth) == 0.0);
}

TEST_CASE("snapshot round trip") {
  testing::TempDir dir;
  const LogLinearPolicy p = testing::TinyPolicy(8);
  SavePolicy(p, dir.path() / "p.bin");
  const LogLinearPolicy q = LoadPolicy(dir.path() / "p.bin");
  CHECK(q.vocab().tokens() == p.vocab().tokens());
  CHECK(std::equal(p.parameters().begin(), p.parameters().end(), q.parameters().begin(),
                   q.parameters().end()));
  CHECK(q.config().hash_buckets == p.config().hash_buckets);
  {
    std::ofstream bad(dir.path() / "bad.bin");
    bad << "not a snapshot";
  }
  CHECK_THROWS(LoadPolicy(dir.path() / "bad.bin"));
  CHECK_THROWS(LoadPolicy(dir.path() / "missing.bin"));
}

TrainConfig SmallConfig(size_t steps) {
  TrainConfig c;
  c.grpo.steps = steps;
  c.grpo.max_new_tokens = 40;
  c.batch_size = 4;
  c.workers = 2;
  c.keep_last_trajectories = true;
  return c;
}

TEST_CASE("training loop contracts") {
  const auto data = GenerateToyTask(3, 50);
  LogLinearPolicy policy(ToyVocabulary(), LogLinearConfig{1 << 10});

  SUBCASE("zero steps leaves the policy untouched") {
    const std::vector<double> before(policy.parameters().begin(), policy.parameters().end());
    const auto result = TrainMsrl(data, policy, SmallConfig(0));
    CHECK(result.metrics.empty());
    CHECK(std::equal(before.begin(), before.end(), policy.parameters().begin()));
  }
  SUBCASE("reference stays frozen and trajectories keep their lineage") {
    FormatPriorConfig prior;
    prior.steps = 20;
    PretrainFormatPrior(policy, prior);
    const LogLinearPolicy reference = policy;
    const std::vector<double> ref_before(reference.parameters().begin(),
                                         reference.parameters().end());
    const std::vector<double> before(policy.parameters().begin(), policy.parameters().end());
    std::vector<size_t> seen;
    const auto result = TrainMsrl(
        data, policy, SmallConfig(5), [&](const StepMetrics& m) { seen.push_back(m.step); },
        &reference);
    CHECK(seen == std::vector<size_t>{1, 2, 3, 4, 5});
    CHECK(std::memcmp(ref_before.data(), reference.parameters().data(),
                      ref_before.size() * sizeof(double)) == 0);
    CHECK_FALSE(std::equal(before.begin(), before.end(), policy.parameters().begin()));
    REQUIRE(result.last_trajectories.size() == 4);
    for (const Trajectory& t : result.last_trajectories) {
      REQUIRE(t.queries.size() == kNumSteps);
      REQUIRE(t.outputs.size() == kNumSteps);
      CHECK(t.queries[2]->text.find(t.queries[0]->text) != std::string::npos);
      CHECK(t.queries[2]->text.find(t.outputs[0].text) != std::string::npos);
      CHECK(t.queries[2]->text.find(t.outputs[1].text) != std::string::npos);
      CHECK(t.queries[2]->prev == t.queries[1]);
      CHECK(t.queries[1]->prev == t.queries[0]);
    }
    for (const StepMetrics& m : result.metrics) {
      CHECK(std::isfinite(m.objective));
      CHECK(m.mean_kl >= 0);
      const auto j = StepMetricsToJson(m);
      for (const char* key : {"step", "mean_reward_k1", "mean_reward_k2", "mean_reward_k3",
                              "mean_kl", "clip_fraction"}) {
        CHECK(j.contains(key));
      }
    }
  }
  SUBCASE("same seed, same run") {
    LogLinearPolicy other = policy;
    const auto a = TrainMsrl(data, policy, SmallConfig(3));
    const auto b = TrainMsrl(data, other, SmallConfig(3));
    CHECK(std::equal(policy.parameters().begin(), policy.parameters().end(),
                     other.parameters().begin()));
    CHECK(a.metrics.back().mean_reward == b.metrics.back().mean_reward);
  }
  SUBCASE("single-step mode") {
    TrainConfig c = SmallConfig(2);
    c.mode = TrainMode::kSingleStepRl;
    const auto result = TrainMsrl(data, policy, c);
    REQUIRE(result.last_trajectories.size() == 4);
    CHECK(result.last_trajectories[0].queries.size() == 1);
  }
  SUBCASE("teacher-forced context") {
    TrainConfig c = SmallConfig(1);
    c.teacher_forced_context = true;
    const auto result = TrainMsrl(data, policy, c);
    for (const Trajectory& t : result.last_trajectories) {
      CHECK(t.queries[1]->prev_output.find("<answer>") != std::string::npos);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(TrainMsrl({}, policy, SmallConfig(1)), std::invalid_argument);
    auto multi = data;
    multi[0].n_errors = 2;
    multi[0].errors.push_back(multi[0].errors[0]);
    CHECK_THROWS_AS(TrainMsrl(multi, policy, SmallConfig(1)), std::invalid_argument);
    TrainConfig bad = SmallConfig(1);
    bad.grpo.group_size = 1;
    CHECK_THROWS_AS(TrainMsrl(data, policy, bad), std::invalid_argument);
    for (double& p : policy.parameters()) p = std::nan("");
    CHECK_THROWS_AS(TrainMsrl(data, policy, SmallConfig(1)), TrainingDivergedError);
  }
  CHECK(ParseTrainMode("msrl") == TrainMode::kMsrl);
  CHECK(ParseTrainMode("single_step_rl") == TrainMode::kSingleStepRl);
  CHECK_FALSE(ParseTrainMode("sft").has_value());
}

}  // namespace
}  // namespace reportfix

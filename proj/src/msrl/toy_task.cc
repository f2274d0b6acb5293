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

#include "reportfix/msrl/toy_task.h"

#include <array>
#include <cstdio>

#include "reportfix/common/random.h"
#include "reportfix/forge/injection.h"
#include "reportfix/msrl/grpo.h"

namespace reportfix {
namespace {

constexpr std::array<std::string_view, 2> kSizes = {"small", "large"};
constexpr std::array<std::string_view, 2> kSides = {"left", "right"};
constexpr std::array<std::string_view, 3> kFindings = {"effusion", "opacity", "nodule"};
constexpr std::array<std::string_view, 2> kHeart = {"Heart size is normal.",
                                                    "Heart size is enlarged."};
constexpr std::array<std::string_view, 2> kLungs = {"No pneumothorax.", "Lungs are clear."};
const std::vector<std::string> kToyPool = {"Mild edema.", "Old fracture.", "Trace atelectasis."};
constexpr std::string_view kThinkText = "checking the report";

template <size_t N>
std::string_view Pick(const std::array<std::string_view, N>& options, Rng& rng) {
  return options[rng.Index(N)];
}

std::string ToyReportText(Rng& rng) {
  const std::string size(Pick(kSizes, rng));
  const std::string side(Pick(kSides, rng));
  const std::string finding(Pick(kFindings, rng));
  return "Findings: There is a " + size + " " + side + " " + finding + ". " +
         std::string(Pick(kHeart, rng)) + " " + std::string(Pick(kLungs, rng)) +
         "\nImpression: " + size + " " + side + " " + finding + ".";
}

}  // namespace

std::string_view ToyDescription(ErrorType type) {
  switch (type) {
    case ErrorType::kOmission: return "a sentence was removed";
    case ErrorType::kInsertion: return "a sentence was added";
    case ErrorType::kSpellingError: return "a word is misspelled";
    case ErrorType::kSideConfusion: return "the side is wrong";
    case ErrorType::kOther: return "the punctuation is wrong";
  }
  return "";
}

std::vector<CorruptedSample> GenerateToyTask(uint64_t seed, size_t size) {
  RuleInjectorOptions options;
  options.insertion_pool = kToyPool;
  std::vector<CorruptedSample> out;
  out.reserve(size);
  for (size_t i = 0; i < size; ++i) {
    Rng rng(seed, i);
    const ErrorType type = kAllErrorTypes[rng.Index(kNumErrorTypes)];
    // Every toy report has sites for every type, so this loop runs once in
    // practice; it only guards against a pathological draw.
    for (;;) {
      const std::string text = ToyReportText(rng);
      try {
        CorruptedSample s = InjectRuleBased(text, ErrorPlan{1, {type}}, rng, options);
        char id[32];
        std::snprintf(id, sizeof(id), "toy%06zu", i);
        s.sample_id = id;
        std::snprintf(id, sizeof(id), "toyr%06zu", i);
        s.source_report_id = id;
        for (ErrorRecord& e : s.errors) e.description = std::string(ToyDescription(e.error_type));
        out.push_back(std::move(s));
        break;
      } catch (const NoInjectableSiteError&) {
      }
    }
  }
  return out;
}

Vocabulary ToyVocabulary(const StepTemplates& templates) {
  std::vector<std::string> texts;
  for (auto s : kSizes) texts.emplace_back(s);
  for (auto s : kSides) texts.emplace_back(s);
  for (auto s : kFindings) texts.emplace_back(s);
  for (auto s : kHeart) texts.emplace_back(s);
  for (auto s : kLungs) texts.emplace_back(s);
  for (const auto& s : kToyPool) texts.push_back(s);
  texts.emplace_back("Findings: There is a , Impression:");
  texts.emplace_back(kThinkText);
  for (ErrorType t : kAllErrorTypes) {
    texts.emplace_back(ToString(t));
    texts.emplace_back(ToyDescription(t));
  }
  for (const auto& s : templates.instructions) texts.push_back(s);
  texts.push_back(templates.single_step_instruction);
  std::vector<std::string> words;
  for (const auto& t : texts) {
    for (auto& w : SplitPolicyTokens(t)) words.push_back(std::move(w));
  }
  return Vocabulary(words);
}

std::string WrapAnswer(std::string_view answer) {
  return "<think> " + std::string(kThinkText) + " </think> <answer> " + std::string(answer) +
         " </answer>";
}

double PretrainFormatPrior(Policy& policy, const FormatPriorConfig& config,
                           const StepTemplates& templates) {
  AdamOptimizer adam(policy.parameters().size());
  std::vector<double> grad(policy.parameters().size());
  double last_ll = 0;
  for (size_t step = 0; step < config.steps; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    const auto samples =
        GenerateToyTask(SplitMix64(config.seed ^ 0x5f3759dfULL) + step, config.batch_size);
    Rng rng(config.seed, step);
    double ll = 0;
    size_t count = 0;
    auto fit = [&](const std::string& query, const std::string& answer_text) {
      const std::vector<int> tokens = policy.vocab().Encode(WrapAnswer(answer_text));
      const std::vector<double> coeffs(tokens.size(), 1.0 / static_cast<double>(tokens.size()));
      policy.AccumulateGradient(query, tokens, coeffs, grad);
      const auto lp = policy.Score(query, tokens);
      for (double v : lp) ll += v / static_cast<double>(tokens.size());
      ++count;
    };
    for (size_t b = 0; b < samples.size(); ++b) {
      const CorruptedSample& s = samples[b];
      const std::string label(ToString(kAllErrorTypes[rng.Index(kNumErrorTypes)]));
      const std::string desc(ToyDescription(kAllErrorTypes[rng.Index(kNumErrorTypes)]));
      Rng report_rng(config.seed ^ 0x9e37ULL, step * config.batch_size + b);
      const std::string unrelated = ToyReportText(report_rng);
      if (config.single_step) {
        fit(BuildSingleStepQuery(s.corrupted_text, templates)->text,
            label + " | " + desc + " | " + unrelated);
        continue;
      }
      auto q1 = BuildInitialQuery(s.corrupted_text, templates);
      const std::string o1 = WrapAnswer(label);
      auto q2 = BuildStepQuery(2, q1, o1, templates);
      const std::string o2 = WrapAnswer(desc);
      auto q3 = BuildStepQuery(3, q2, o2, templates);
      fit(q1->text, label);
      fit(q2->text, desc);
      fit(q3->text, unrelated);
    }
    adam.Ascend(policy.parameters(), grad, config.learning_rate);
    last_ll = count ? ll / static_cast<double>(count) : 0.0;
  }
  return last_ll;
}

}  // namespace reportfix

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

// Rule-based error injection. Every injected error is a replace operation
// whose spans carry enough context to be undone by a plain replace:
// insertions and omissions include the neighbouring word.

#ifndef REPORTFIX_FORGE_INJECTION_H_
#define REPORTFIX_FORGE_INJECTION_H_

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reportfix/common/random.h"
#include "reportfix/report/dataset.h"
#include "reportfix/report/error_type.h"
#include "reportfix/report/sample.h"

namespace reportfix {

struct InjectionConfig {
  // Indexed by ErrorType. Defaults are the per-type error counts of the
  // reference corpus (omission 6267, insertion 6935, spelling 7119, side
  // 7615, other 1512; 29,448 errors in total).
  std::array<double, kNumErrorTypes> type_weights = {6267, 6935, 7119, 7615, 1512};
  // 2,180 multi-error reports out of 26,326.
  double multi_error_rate = 2180.0 / 26326.0;
  // Weights for drawing 2 or 3 errors in a multi-error report.
  std::array<double, 2> multi_count_weights = {1.0, 1.0};
  uint64_t seed = 0;
};

// Throws std::invalid_argument naming the offending field.
void ValidateInjectionConfig(const InjectionConfig& config);

struct ErrorPlan {
  int n_errors = 1;
  std::vector<ErrorType> types;
};

// n_errors = 1 with probability 1 - multi_error_rate, else 2 or 3 per
// multi_count_weights; each type drawn independently from type_weights.
ErrorPlan SampleErrorPlan(const InjectionConfig& config, Rng& rng);

class NoInjectableSiteError : public std::runtime_error {
 public:
  explicit NoInjectableSiteError(ErrorType type);
  ErrorType type() const { return type_; }

 private:
  ErrorType type_;
};

struct RuleInjectorOptions {
  // Sentences available to insertion errors; empty means the built-in pool.
  std::vector<std::string> insertion_pool;
  // Attempts at drawing non-overlapping sites for a multi-error plan.
  int max_site_draws = 64;
};

// Built-in pool of plausible chest findings used for insertion errors.
std::span<const std::string_view> BuiltinInsertionPool();

// Applies `plan` to `original_text`. Edits are placed left to right and never
// overlap or touch. Throws NoInjectableSiteError when some planned type has no
// free site.
CorruptedSample InjectRuleBased(std::string_view original_text, const ErrorPlan& plan, Rng& rng,
                                const RuleInjectorOptions& options = {});

// Convenience overload for a structured report.
CorruptedSample InjectRuleBased(const Report& report, const ErrorPlan& plan, Rng& rng,
                                const RuleInjectorOptions& options = {});

struct SynthesisStats {
  size_t replans = 0;
  size_t skipped_reports = 0;
};

// Draws a plan and injects it for every report. Report i uses the stream
// Rng(config.seed, i), so results do not depend on batch composition. A
// report that stays uninjectable after `max_replans` plans is skipped.
std::vector<CorruptedSample> SynthesizeRuleBased(const std::vector<CleanReport>& reports,
                                                 const InjectionConfig& config,
                                                 const RuleInjectorOptions& options = {},
                                                 int max_replans = 16,
                                                 SynthesisStats* stats = nullptr);

// Deterministic generator of clean chest X-ray style reports. Every report
// mentions a side at least twice, contains a measurement, and has at least
// three sentences.
std::vector<CleanReport> GenerateCleanReports(uint64_t seed, size_t count);

}  // namespace reportfix

#endif  // REPORTFIX_FORGE_INJECTION_H_

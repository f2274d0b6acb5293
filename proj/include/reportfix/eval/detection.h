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

// Per-type detection precision and recall.

#ifndef REPORTFIX_EVAL_DETECTION_H_
#define REPORTFIX_EVAL_DETECTION_H_

#include <array>
#include <optional>
#include <vector>

#include "reportfix/eval/prediction.h"

namespace reportfix {

struct TypeScores {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  // nullopt when the denominator is zero.
  std::optional<double> precision;
  std::optional<double> recall;
};

struct DetectionScores {
  std::array<TypeScores, kNumErrorTypes> per_type{};
  // Means over the types whose value is defined; nullopt if none is.
  std::optional<double> macro_precision;
  std::optional<double> macro_recall;
};

// Within a sample, each predicted type consumes at most one ground-truth
// error of the same type; counts accumulate over the corpus. Throws
// EvalInputError when the sample ids do not line up.
DetectionScores ComputeDetectionScores(const std::vector<Prediction>& preds,
                                       const std::vector<CorruptedSample>& truth);

// Same, from per-sample type lists already paired up.
DetectionScores DetectionScoresFromPairs(
    const std::vector<std::pair<std::vector<ErrorType>, std::vector<ErrorType>>>& pred_gt);

}  // namespace reportfix

#endif  // REPORTFIX_EVAL_DETECTION_H_

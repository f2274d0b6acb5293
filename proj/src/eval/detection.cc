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

#include "reportfix/eval/detection.h"

#include <algorithm>

namespace reportfix {
namespace {

std::optional<double> Mean(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

DetectionScores DetectionScoresFromPairs(
    const std::vector<std::pair<std::vector<ErrorType>, std::vector<ErrorType>>>& pred_gt) {
  DetectionScores out;
  for (const auto& [pred, gt] : pred_gt) {
    std::array<size_t, kNumErrorTypes> np{}, ng{};
    for (ErrorType t : pred) ++np[Index(t)];
    for (ErrorType t : gt) ++ng[Index(t)];
    for (size_t i = 0; i < kNumErrorTypes; ++i) {
      const size_t tp = std::min(np[i], ng[i]);
      out.per_type[i].tp += tp;
      out.per_type[i].fp += np[i] - tp;
      out.per_type[i].fn += ng[i] - tp;
    }
  }
  std::vector<double> ps, rs;
  for (TypeScores& s : out.per_type) {
    if (s.tp + s.fp > 0) {
      s.precision = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp);
      ps.push_back(*s.precision);
    }
    if (s.tp + s.fn > 0) {
      s.recall = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fn);
      rs.push_back(*s.recall);
    }
  }
  out.macro_precision = Mean(ps);
  out.macro_recall = Mean(rs);
  return out;
}

DetectionScores ComputeDetectionScores(const std::vector<Prediction>& preds,
                                       const std::vector<CorruptedSample>& truth) {
  const auto aligned = AlignPredictions(preds, truth);
  std::vector<std::pair<std::vector<ErrorType>, std::vector<ErrorType>>> pairs;
  pairs.reserve(truth.size());
  for (size_t i = 0; i < truth.size(); ++i) {
    std::vector<ErrorType> gt;
    for (const ErrorRecord& e : truth[i].errors) gt.push_back(e.error_type);
    pairs.emplace_back(aligned[i]->predicted_types, std::move(gt));
  }
  return DetectionScoresFromPairs(pairs);
}

}  // namespace reportfix

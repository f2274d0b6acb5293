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

// Exhaustive matcher: tries every assignment of predicted labels to
// same-type ground-truth slots and keeps one with the most matches.

#ifndef REPORTFIX_TESTS_ORACLES_DETECTION_ORACLE_H_
#define REPORTFIX_TESTS_ORACLES_DETECTION_ORACLE_H_

#include <array>
#include <functional>
#include <vector>

#include "reportfix/report/error_type.h"

namespace reportfix::oracle {

struct Counts {
  std::array<size_t, kNumErrorTypes> tp{}, fp{}, fn{};
};

inline void BruteForceSample(const std::vector<ErrorType>& pred, const std::vector<ErrorType>& gt,
                             Counts& acc) {
  std::vector<int> assign(pred.size(), -1), best;
  std::vector<bool> used(gt.size(), false);
  int best_matches = -1;
  std::function<void(size_t, int)> go = [&](size_t i, int matches) {
    if (i == pred.size()) {
      if (matches > best_matches) {
        best_matches = matches;
        best = assign;
      }
      return;
    }
    assign[i] = -1;
    go(i + 1, matches);
    for (size_t j = 0; j < gt.size(); ++j) {
      if (used[j] || gt[j] != pred[i]) continue;
      used[j] = true;
      assign[i] = static_cast<int>(j);
      go(i + 1, matches + 1);
      used[j] = false;
      assign[i] = -1;
    }
  };
  go(0, 0);
  std::vector<bool> gt_hit(gt.size(), false);
  for (size_t i = 0; i < pred.size(); ++i) {
    const size_t t = static_cast<size_t>(pred[i]);
    if (best[i] >= 0) {
      ++acc.tp[t];
      gt_hit[static_cast<size_t>(best[i])] = true;
    } else {
      ++acc.fp[t];
    }
  }
  for (size_t j = 0; j < gt.size(); ++j) {
    if (!gt_hit[j]) ++acc.fn[static_cast<size_t>(gt[j])];
  }
}

}  // namespace reportfix::oracle

#endif  // REPORTFIX_TESTS_ORACLES_DETECTION_ORACLE_H_

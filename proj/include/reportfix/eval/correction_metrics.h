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

// Correction quality at report and sentence level: native BLEU and ROUGE-L
// plus any external scorers.

#ifndef REPORTFIX_EVAL_CORRECTION_METRICS_H_
#define REPORTFIX_EVAL_CORRECTION_METRICS_H_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "reportfix/eval/prediction.h"
#include "reportfix/eval/scorer.h"

namespace reportfix {

// Fixed table columns. Scorers with other names are appended after these.
inline constexpr std::array<std::string_view, 6> kStandardMetrics = {
    "bleu", "rouge_l", "bertscore", "sembscore", "chexbert_f1", "radgraph_f1"};

struct MetricRow {
  std::string group;  // "all" or an error type label
  size_t n = 0;
  // Parallel to MetricsTable::metrics; nullopt = unavailable or no pairs.
  std::vector<std::optional<double>> values;
};

struct MetricsTable {
  std::vector<std::string> metrics{kStandardMetrics.begin(), kStandardMetrics.end()};
  // Empty when there was nothing to score; otherwise "all" then one row per
  // error type.
  std::vector<MetricRow> rows;
  // Pairs whose candidate fell back to the raw model output.
  size_t fallback_count = 0;
  std::vector<std::string> notes;

  // Value of `metric` in the "all" row.
  std::optional<double> Overall(std::string_view metric) const;
};

struct MetricOptions {
  size_t workers = 1;
};

// One pair per sample: the prediction's corrected text (or its raw output
// when the correction is missing) against the original report. Rows per
// error type cover single-error samples only.
MetricsTable ReportLevelMetrics(const std::vector<Prediction>& preds,
                                const std::vector<CorruptedSample>& truth,
                                const std::vector<Scorer*>& scorers = {},
                                const MetricOptions& options = {});

// One pair per ground-truth error: the original-report sentence that overlaps
// the error's original span most, against the predicted sentence chosen by
// PairSentence. Throws EvalInputError when a span cannot be located.
MetricsTable SentenceLevelMetrics(const std::vector<Prediction>& preds,
                                  const std::vector<CorruptedSample>& truth,
                                  const std::vector<Scorer*>& scorers = {},
                                  const MetricOptions& options = {});

// Index of the candidate sentence with the highest token-overlap F1 against
// `target`; ties go to the index closest to `target_index`, then the lower
// index. nullopt when `candidates` is empty.
std::optional<size_t> PairSentence(std::string_view target, size_t target_index,
                                   const std::vector<std::string>& candidates);

// Index of the sentence of `text` that overlaps [begin, end) the most (ties:
// earliest); an empty range picks the sentence at `begin`.
size_t SentenceForSpan(std::string_view text, size_t begin, size_t end);

}  // namespace reportfix

#endif  // REPORTFIX_EVAL_CORRECTION_METRICS_H_

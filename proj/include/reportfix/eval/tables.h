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

// CSV and plain-text renderings of the evaluation results.

#ifndef REPORTFIX_EVAL_TABLES_H_
#define REPORTFIX_EVAL_TABLES_H_

#include <filesystem>
#include <string>
#include <vector>

#include "reportfix/eval/correction_metrics.h"
#include "reportfix/eval/detection.h"

namespace reportfix {

// Five type rows and a macro row; undefined values print as "NA".
std::string DetectionCsv(const DetectionScores& scores);
std::string DetectionText(const DetectionScores& scores);

// Header only when the table has no rows.
std::string MetricsCsv(const MetricsTable& table);
std::string MetricsText(const MetricsTable& table, std::string_view title);

// Writes detection.{csv,txt}, report_metrics.{csv,txt} and
// sentence_metrics.{csv,txt} into `out_dir`, creating it if needed. Returns
// the written paths. Throws std::runtime_error when a file cannot be written.
std::vector<std::filesystem::path> EmitTables(const DetectionScores& detection,
                                              const MetricsTable& report_metrics,
                                              const MetricsTable& sentence_metrics,
                                              const std::filesystem::path& out_dir);

}  // namespace reportfix

#endif  // REPORTFIX_EVAL_TABLES_H_

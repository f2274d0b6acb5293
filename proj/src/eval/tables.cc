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

#include "reportfix/eval/tables.h"

#include <cstdio>
#include <fstream>
#include <optional>

namespace reportfix {
namespace {

std::string Fixed(const std::optional<double>& v) {
  if (!v) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

std::string Join(const std::vector<std::string>& cells, char sep) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out.push_back(sep);
    out += cells[i];
  }
  return out;
}

std::string Grid(const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> width(rows.front().size(), 0);
  for (const auto& r : rows) {
    for (size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::string rule = "+";
  for (size_t w : width) rule += std::string(w + 2, '-') + "+";
  rule += "\n";
  std::string out = rule;
  for (size_t i = 0; i < rows.size(); ++i) {
    out += "|";
    for (size_t c = 0; c < rows[i].size(); ++c) {
      // Labels left-aligned, numbers right-aligned.
      const std::string pad(width[c] - rows[i][c].size(), ' ');
      out += " " + (c == 0 ? rows[i][c] + pad : pad + rows[i][c]) + " |";
    }
    out += "\n";
    if (i == 0 || i + 1 == rows.size()) out += rule;
  }
  return out;
}

std::vector<std::vector<std::string>> DetectionRows(const DetectionScores& s) {
  std::vector<std::vector<std::string>> rows = {
      {"error_type", "precision", "recall", "tp", "fp", "fn"}};
  size_t tp = 0, fp = 0, fn = 0;
  for (ErrorType t : kAllErrorTypes) {
    const TypeScores& ts = s.per_type[Index(t)];
    rows.push_back({std::string(ToString(t)), Fixed(ts.precision), Fixed(ts.recall),
                    std::to_string(ts.tp), std::to_string(ts.fp), std::to_string(ts.fn)});
    tp += ts.tp;
    fp += ts.fp;
    fn += ts.fn;
  }
  rows.push_back({"macro", Fixed(s.macro_precision), Fixed(s.macro_recall), std::to_string(tp),
                  std::to_string(fp), std::to_string(fn)});
  return rows;
}

std::vector<std::vector<std::string>> MetricRows(const MetricsTable& t) {
  std::vector<std::string> header = {"group", "n"};
  header.insert(header.end(), t.metrics.begin(), t.metrics.end());
  std::vector<std::vector<std::string>> rows = {header};
  for (const MetricRow& r : t.rows) {
    std::vector<std::string> cells = {r.group, std::to_string(r.n)};
    for (const auto& v : r.values) cells.push_back(Fixed(v));
    rows.push_back(std::move(cells));
  }
  return rows;
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string DetectionCsv(const DetectionScores& scores) {
  std::string out;
  for (const auto& r : DetectionRows(scores)) out += Join(r, ',') + "\n";
  return out;
}

std::string DetectionText(const DetectionScores& scores) {
  return "Error detection\n" + Grid(DetectionRows(scores)) +
         "NA: undefined (zero denominator), left out of the macro average.\n";
}

std::string MetricsCsv(const MetricsTable& table) {
  std::string out;
  for (const auto& r : MetricRows(table)) out += Join(r, ',') + "\n";
  return out;
}

std::string MetricsText(const MetricsTable& table, std::string_view title) {
  std::string out = std::string(title) + "\n" + Grid(MetricRows(table));
  if (table.fallback_count > 0) {
    out += std::to_string(table.fallback_count) +
           " prediction(s) had no corrected report and were scored on the raw output.\n";
  }
  for (const std::string& note : table.notes) out += "note: " + note + "\n";
  return out;
}

std::vector<std::filesystem::path> EmitTables(const DetectionScores& detection,
                                              const MetricsTable& report_metrics,
                                              const MetricsTable& sentence_metrics,
                                              const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());
  const std::vector<std::pair<std::string, std::string>> files = {
      {"detection.csv", DetectionCsv(detection)},
      {"detection.txt", DetectionText(detection)},
      {"report_metrics.csv", MetricsCsv(report_metrics)},
      {"report_metrics.txt", MetricsText(report_metrics, "Report-level correction")},
      {"sentence_metrics.csv", MetricsCsv(sentence_metrics)},
      {"sentence_metrics.txt", MetricsText(sentence_metrics, "Sentence-level correction")},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, text] : files) {
    WriteText(out_dir / name, text);
    written.push_back(out_dir / name);
  }
  return written;
}

}  // namespace reportfix

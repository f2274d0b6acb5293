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

#include "reportfix/eval/correction_metrics.h"

#include <algorithm>
#include <cstdlib>

#include "reportfix/common/parallel.h"
#include "reportfix/report/edits.h"
#include "reportfix/report/sentences.h"
#include "reportfix/reward/text_metrics.h"

namespace reportfix {
namespace {

struct GroupedPair {
  ScorePair pair;
  std::optional<ErrorType> group;
};

MetricsTable BuildTable(const std::vector<GroupedPair>& pairs, const std::vector<Scorer*>& scorers,
                        const MetricOptions& options) {
  MetricsTable table;
  for (Scorer* s : scorers) {
    if (std::find(table.metrics.begin(), table.metrics.end(), s->name()) == table.metrics.end()) {
      table.metrics.push_back(s->name());
    }
  }
  if (pairs.empty()) return table;

  // scores[m][i], nullopt when metric m is unavailable.
  std::vector<std::optional<std::vector<double>>> scores(table.metrics.size());
  const auto native = OrderedParallelMap<std::array<double, 2>>(
      pairs.size(), options.workers, [&](size_t i) {
        const auto cand = MetricTokens(pairs[i].pair.candidate);
        const auto ref = MetricTokens(pairs[i].pair.reference);
        return std::array<double, 2>{BleuTokens(cand, ref), RougeLTokens(cand, ref)};
      });
  for (int m = 0; m < 2; ++m) {
    scores[m].emplace();
    for (const auto& v : native) scores[m]->push_back(v[m]);
  }
  std::vector<ScorePair> batch;
  for (const auto& p : pairs) batch.push_back(p.pair);
  for (Scorer* s : scorers) {
    const size_t m = std::find(table.metrics.begin(), table.metrics.end(), s->name()) -
                     table.metrics.begin();
    if (m < 2) {
      table.notes.push_back(s->name() + " is computed natively; plugin ignored");
      continue;
    }
    try {
      scores[m] = s->ScoreBatch(batch);
    } catch (const ScorerError& e) {
      table.notes.push_back(std::string(e.what()) + "; reported as unavailable");
    }
  }
  for (size_t m = 2; m < table.metrics.size(); ++m) {
    const bool registered = std::any_of(scorers.begin(), scorers.end(),
                                        [&](Scorer* s) { return s->name() == table.metrics[m]; });
    if (!registered) table.notes.push_back(table.metrics[m] + ": no scorer configured");
  }

  auto row = [&](std::string group, const std::optional<ErrorType>& filter) {
    MetricRow r;
    r.group = std::move(group);
    std::vector<size_t> members;
    for (size_t i = 0; i < pairs.size(); ++i) {
      if (!filter || pairs[i].group == filter) members.push_back(i);
    }
    r.n = members.size();
    for (const auto& column : scores) {
      if (!column || members.empty()) {
        r.values.push_back(std::nullopt);
        continue;
      }
      double sum = 0;
      for (size_t i : members) sum += (*column)[i];
      r.values.push_back(sum / static_cast<double>(members.size()));
    }
    return r;
  };
  table.rows.push_back(row("all", std::nullopt));
  for (ErrorType t : kAllErrorTypes) table.rows.push_back(row(std::string(ToString(t)), t));
  return table;
}

const std::string& Candidate(const Prediction& p, size_t& fallbacks) {
  if (!p.corrected_text.empty()) return p.corrected_text;
  ++fallbacks;
  return p.raw_output;
}

}  // namespace

std::optional<double> MetricsTable::Overall(std::string_view metric) const {
  if (rows.empty()) return std::nullopt;
  for (size_t m = 0; m < metrics.size(); ++m) {
    if (metrics[m] == metric) return rows.front().values[m];
  }
  return std::nullopt;
}

MetricsTable ReportLevelMetrics(const std::vector<Prediction>& preds,
                                const std::vector<CorruptedSample>& truth,
                                const std::vector<Scorer*>& scorers, const MetricOptions& options) {
  const auto aligned = AlignPredictions(preds, truth);
  std::vector<GroupedPair> pairs;
  size_t fallbacks = 0;
  for (size_t i = 0; i < truth.size(); ++i) {
    GroupedPair g;
    g.pair = {truth[i].sample_id, Candidate(*aligned[i], fallbacks), truth[i].original_text};
    if (truth[i].errors.size() == 1) g.group = truth[i].errors[0].error_type;
    pairs.push_back(std::move(g));
  }
  MetricsTable table = BuildTable(pairs, scorers, options);
  table.fallback_count = fallbacks;
  return table;
}

std::optional<size_t> PairSentence(std::string_view target, size_t target_index,
                                   const std::vector<std::string>& candidates) {
  std::optional<size_t> best;
  double best_f1 = -1;
  size_t best_dist = 0;
  for (size_t j = 0; j < candidates.size(); ++j) {
    const double f1 = TokenOverlapF1(candidates[j], target);
    const size_t dist = j > target_index ? j - target_index : target_index - j;
    if (!best || f1 > best_f1 || (f1 == best_f1 && dist < best_dist)) {
      best = j;
      best_f1 = f1;
      best_dist = dist;
    }
  }
  return best;
}

size_t SentenceForSpan(std::string_view text, size_t begin, size_t end) {
  const auto spans = SentenceSpans(text);
  if (spans.empty()) return 0;
  if (end <= begin) return SentenceIndexAt(spans, begin);
  size_t best = 0, best_overlap = 0;
  for (size_t i = 0; i < spans.size(); ++i) {
    const size_t lo = std::max(begin, spans[i].begin);
    const size_t hi = std::min(end, spans[i].end);
    const size_t overlap = hi > lo ? hi - lo : 0;
    if (overlap > best_overlap) {
      best = i;
      best_overlap = overlap;
    }
  }
  return best_overlap > 0 ? best : SentenceIndexAt(spans, begin);
}

MetricsTable SentenceLevelMetrics(const std::vector<Prediction>& preds,
                                  const std::vector<CorruptedSample>& truth,
                                  const std::vector<Scorer*>& scorers,
                                  const MetricOptions& options) {
  const auto aligned = AlignPredictions(preds, truth);
  std::vector<GroupedPair> pairs;
  size_t fallbacks = 0;
  for (size_t i = 0; i < truth.size(); ++i) {
    const CorruptedSample& s = truth[i];
    TrackedReversal tracked;
    try {
      tracked = ReverseEditsTracked(s);
    } catch (const SpanNotFoundError& e) {
      throw EvalInputError("sample " + s.sample_id + ": " + e.what());
    }
    if (tracked.text != s.original_text) {
      throw EvalInputError("sample " + s.sample_id +
                           ": error spans do not reconstruct the original report");
    }
    const std::vector<std::string> gt_sentences = SegmentSentences(s.original_text);
    const std::vector<std::string> model_sentences =
        SegmentSentences(Candidate(*aligned[i], fallbacks));
    for (size_t e = 0; e < s.errors.size(); ++e) {
      const size_t off = tracked.original_offsets[e];
      const size_t gi =
          SentenceForSpan(s.original_text, off, off + s.errors[e].original_span.size());
      const std::string target = gi < gt_sentences.size() ? gt_sentences[gi] : "";
      const auto mj = PairSentence(target, gi, model_sentences);
      GroupedPair g;
      g.pair = {s.sample_id + "#" + std::to_string(e), mj ? model_sentences[*mj] : "", target};
      g.group = s.errors[e].error_type;
      pairs.push_back(std::move(g));
    }
  }
  MetricsTable table = BuildTable(pairs, scorers, options);
  table.fallback_count = fallbacks;
  return table;
}

}  // namespace reportfix

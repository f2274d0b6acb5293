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

#include "reportfix/report/edits.h"

#include <algorithm>

namespace reportfix {

SpanNotFoundError::SpanNotFoundError(std::string span, int occurrence)
    : std::runtime_error("span not found: \"" + span + "\" (occurrence " +
                         std::to_string(occurrence) + ")"),
      span_(std::move(span)),
      occurrence_(occurrence) {}

ReconstructionMismatchError::ReconstructionMismatchError(size_t offset)
    : std::runtime_error("reconstruction differs from original_text at byte " +
                         std::to_string(offset)),
      offset_(offset) {}

std::optional<size_t> FindOccurrence(std::string_view text, std::string_view span,
                                     int occurrence) {
  if (occurrence < 1) return std::nullopt;
  if (span.empty()) {
    const size_t pos = static_cast<size_t>(occurrence - 1);
    if (pos > text.size()) return std::nullopt;
    return pos;
  }
  size_t pos = text.find(span);
  for (int seen = 1; pos != std::string_view::npos; ++seen) {
    if (seen == occurrence) return pos;
    pos = text.find(span, pos + 1);
  }
  return std::nullopt;
}

std::string ApplyEdit(std::string_view text, std::string_view original_span,
                      std::string_view corrupted_span, int occurrence) {
  const auto pos = FindOccurrence(text, original_span, occurrence);
  if (!pos) throw SpanNotFoundError(std::string(original_span), occurrence);
  std::string out;
  out.reserve(text.size() - original_span.size() + corrupted_span.size());
  out.append(text.substr(0, *pos));
  out.append(corrupted_span);
  out.append(text.substr(*pos + original_span.size()));
  return out;
}

TrackedReversal ReverseEditsTracked(const CorruptedSample& sample) {
  TrackedReversal result;
  result.text = sample.corrupted_text;
  result.original_offsets.assign(sample.errors.size(), 0);
  for (size_t i = sample.errors.size(); i-- > 0;) {
    const ErrorRecord& e = sample.errors[i];
    const auto pos = FindOccurrence(result.text, e.corrupted_span, e.Occurrence());
    if (!pos) throw SpanNotFoundError(e.corrupted_span, e.Occurrence());
    result.text.replace(*pos, e.corrupted_span.size(), e.original_span);
    result.original_offsets[i] = *pos;
    // Spans already restored to the right of this edit move with it.
    const auto delta = static_cast<std::ptrdiff_t>(e.original_span.size()) -
                       static_cast<std::ptrdiff_t>(e.corrupted_span.size());
    for (size_t j = i + 1; j < sample.errors.size(); ++j) {
      if (result.original_offsets[j] >= *pos + e.corrupted_span.size()) {
        result.original_offsets[j] =
            static_cast<size_t>(static_cast<std::ptrdiff_t>(result.original_offsets[j]) + delta);
      }
    }
  }
  return result;
}

std::optional<size_t> FirstDifference(std::string_view a, std::string_view b) {
  const size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return i;
  }
  if (a.size() != b.size()) return n;
  return std::nullopt;
}

std::string ReverseEdits(const CorruptedSample& sample) {
  TrackedReversal reversal = ReverseEditsTracked(sample);
  if (const auto diff = FirstDifference(reversal.text, sample.original_text)) {
    throw ReconstructionMismatchError(*diff);
  }
  return std::move(reversal.text);
}

}  // namespace reportfix

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

#ifndef REPORTFIX_REPORT_EDITS_H_
#define REPORTFIX_REPORT_EDITS_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reportfix/report/sample.h"

namespace reportfix {

class SpanNotFoundError : public std::runtime_error {
 public:
  SpanNotFoundError(std::string span, int occurrence);

  const std::string& span() const { return span_; }
  int occurrence() const { return occurrence_; }

 private:
  std::string span_;
  int occurrence_;
};

class ReconstructionMismatchError : public std::runtime_error {
 public:
  explicit ReconstructionMismatchError(size_t offset);

  // First byte offset at which the reconstruction differs from the original.
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// Byte offset of the occurrence-th (1-based) match of `span` in `text`.
// Matches may overlap. An empty span matches at every offset 0..size, so
// occurrence k of "" is offset k-1.
std::optional<size_t> FindOccurrence(std::string_view text, std::string_view span,
                                     int occurrence);

// Replaces the occurrence-th match of `original_span` with `corrupted_span`.
// Throws SpanNotFoundError.
std::string ApplyEdit(std::string_view text, std::string_view original_span,
                      std::string_view corrupted_span, int occurrence = 1);

struct TrackedReversal {
  std::string text;
  // Byte offset of each error's original_span in `text`, parallel to
  // sample.errors.
  std::vector<size_t> original_offsets;
};

// Undoes every error, last first, without comparing against original_text.
// Throws SpanNotFoundError.
TrackedReversal ReverseEditsTracked(const CorruptedSample& sample);

// Undoes every error and checks the result against sample.original_text.
// Throws SpanNotFoundError or ReconstructionMismatchError.
std::string ReverseEdits(const CorruptedSample& sample);

// Index of the first differing byte, or nullopt when equal.
std::optional<size_t> FirstDifference(std::string_view a, std::string_view b);

}  // namespace reportfix

#endif  // REPORTFIX_REPORT_EDITS_H_

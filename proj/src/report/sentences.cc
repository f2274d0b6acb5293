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

#include "reportfix/report/sentences.h"

#include <array>

#include "reportfix/common/strings.h"

namespace reportfix {
namespace {

constexpr std::array<std::string_view, 6> kGuardedAbbreviations = {
    "dr.", "a.m.", "p.m.", "e.g.", "i.e.", "vs."};

bool IsTerminator(char c) { return c == '.' || c == '?' || c == '!'; }

// `period` indexes a '.' that ends a terminator run.
bool PeriodIsGuarded(std::string_view text, size_t period) {
  const bool prev_digit = period > 0 && IsAsciiDigit(text[period - 1]);
  const bool next_digit = period + 1 < text.size() && IsAsciiDigit(text[period + 1]);
  if (prev_digit && next_digit) return true;

  size_t word_begin = period;
  while (word_begin > 0 && !IsAsciiSpace(text[word_begin - 1])) --word_begin;
  // Leading brackets or quotes do not belong to the word.
  while (word_begin < period && (text[word_begin] == '(' || text[word_begin] == '[' ||
                                 text[word_begin] == '"' || text[word_begin] == '\'')) {
    ++word_begin;
  }
  const std::string word = AsciiLower(text.substr(word_begin, period + 1 - word_begin));
  if (word.size() == 2 && IsAsciiAlpha(word[0])) return true;
  for (std::string_view abbr : kGuardedAbbreviations) {
    if (word == abbr) return true;
  }
  return false;
}

}  // namespace

std::vector<SentenceSpan> SentenceSpans(std::string_view text) {
  std::vector<SentenceSpan> spans;
  size_t i = 0;
  while (i < text.size() && IsAsciiSpace(text[i])) ++i;
  size_t start = i;
  while (i < text.size()) {
    if (!IsTerminator(text[i])) {
      ++i;
      continue;
    }
    size_t run_end = i;
    while (run_end + 1 < text.size() && IsTerminator(text[run_end + 1])) ++run_end;
    const size_t sentence_end = run_end + 1;
    size_t next = sentence_end;
    while (next < text.size() && IsAsciiSpace(text[next])) ++next;
    const bool followed_by_space = next > sentence_end;
    const bool opens_sentence =
        next < text.size() && (IsAsciiUpper(text[next]) || IsAsciiDigit(text[next]));
    const bool guarded = text[run_end] == '.' && PeriodIsGuarded(text, run_end);
    if (followed_by_space && opens_sentence && !guarded) {
      spans.push_back({start, sentence_end});
      start = next;
      i = next;
    } else {
      i = sentence_end;
    }
  }
  size_t end = text.size();
  while (end > start && IsAsciiSpace(text[end - 1])) --end;
  if (end > start) spans.push_back({start, end});
  return spans;
}

std::vector<std::string> SegmentSentences(std::string_view text) {
  std::vector<std::string> out;
  for (const SentenceSpan& s : SentenceSpans(text)) {
    out.emplace_back(text.substr(s.begin, s.end - s.begin));
  }
  return out;
}

size_t SentenceIndexAt(const std::vector<SentenceSpan>& spans, size_t offset) {
  for (size_t i = 0; i < spans.size(); ++i) {
    if (offset < spans[i].end) return i;
  }
  return spans.empty() ? 0 : spans.size() - 1;
}

}  // namespace reportfix

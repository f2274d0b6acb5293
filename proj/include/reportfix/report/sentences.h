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

#ifndef REPORTFIX_REPORT_SENTENCES_H_
#define REPORTFIX_REPORT_SENTENCES_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace reportfix {

// Half-open byte range [begin, end) of one sentence.
struct SentenceSpan {
  size_t begin = 0;
  size_t end = 0;
};

// Sentence boundaries. A boundary follows a run of [.?!] that is followed by
// whitespace and then an uppercase ASCII letter or a digit, except when the
// run ends in a period that closes a single-letter word (initials), a decimal
// number, or one of "dr.", "a.m.", "p.m.", "e.g.", "i.e.", "vs.".
//
// Sentences exclude surrounding whitespace; the whitespace between
// consecutive spans is exactly the input's inter-sentence whitespace.
std::vector<SentenceSpan> SentenceSpans(std::string_view text);

std::vector<std::string> SegmentSentences(std::string_view text);

// Index of the sentence containing byte `offset`; offsets that fall in
// inter-sentence whitespace map to the following sentence (or the last one).
size_t SentenceIndexAt(const std::vector<SentenceSpan>& spans, size_t offset);

}  // namespace reportfix

#endif  // REPORTFIX_REPORT_SENTENCES_H_

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

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "reportfix/common/random.h"
#include "reportfix/common/strings.h"
#include "reportfix/report/dataset.h"
#include "reportfix/report/edits.h"
#include "reportfix/report/error_type.h"
#include "reportfix/report/sample.h"
#include "reportfix/report/sentences.h"

namespace reportfix {
namespace {

// Independent occurrence oracle: compares every substring position.
std::vector<size_t> AllMatchPositions(const std::string& text, const std::string& span) {
  std::vector<size_t> out;
  for (size_t i = 0; i + span.size() <= text.size(); ++i) {
    if (text.compare(i, span.size(), span) == 0) out.push_back(i);
  }
  return out;
}

CorruptedSample SingleErrorSample() {
  CorruptedSample s;
  s.sample_id = "s1";
  s.source_report_id = "r1";
  s.original_text = "Findings: There is a left pleural effusion.";
  s.corrupted_text = "Findings: There is a right pleural effusion.";
  s.errors.push_back({ErrorType::kSideConfusion, "left", "right",
                      "Side confusion: \"left\" was changed to \"right\".", std::nullopt});
  s.n_errors = 1;
  s.split = Split::kTest;
  return s;
}

std::filesystem::path TempFile(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path, std::ios::binary) << contents;
  return path;
}

TEST_CASE("error type labels round-trip case-insensitively") {
  for (ErrorType t : kAllErrorTypes) {
    CHECK(ParseErrorType(ToString(t)) == t);
    std::string upper(ToString(t));
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    CHECK(ParseErrorType(upper) == t);
    CHECK(ParseErrorType("  " + upper + "\n") == t);
  }
  CHECK(ParseErrorType("Spelling   Error") == ErrorType::kSpellingError);
  CHECK_FALSE(ParseErrorType("laterality error").has_value());
  CHECK_FALSE(ParseErrorType("side_confusion").has_value());
  CHECK_FALSE(ParseErrorType("").has_value());
}

TEST_CASE("apply_edit examples") {
  CHECK(ApplyEdit("left pleural effusion", "left", "right", 1) == "right pleural effusion");
  CHECK(ApplyEdit("a b a", "a", "c", 2) == "a b c");
  CHECK(ApplyEdit("no acute findings", "acute ", "", 1) == "no findings");
  CHECK_THROWS_AS(ApplyEdit("a b a", "a", "c", 3), SpanNotFoundError);
  CHECK_THROWS_AS(ApplyEdit("abc", "x", "y", 1), SpanNotFoundError);
  try {
    ApplyEdit("abc", "zz", "y", 2);
  } catch (const SpanNotFoundError& e) {
    CHECK(e.span() == "zz");
    CHECK(e.occurrence() == 2);
  }
}

TEST_CASE("apply_edit occurrence matches brute-force scan") {
  Rng rng(7);
  const std::string alphabet = "ab ";
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const size_t len = 1 + rng.Index(12);
    for (size_t i = 0; i < len; ++i) text.push_back(alphabet[rng.Index(alphabet.size())]);
    std::string span;
    const size_t span_len = 1 + rng.Index(3);
    for (size_t i = 0; i < span_len; ++i) span.push_back(alphabet[rng.Index(2)]);
    const auto positions = AllMatchPositions(text, span);
    for (size_t k = 0; k < positions.size(); ++k) {
      const std::string expected =
          text.substr(0, positions[k]) + "X" + text.substr(positions[k] + span.size());
      CHECK(ApplyEdit(text, span, "X", static_cast<int>(k + 1)) == expected);
    }
    CHECK_THROWS_AS(ApplyEdit(text, span, "X", static_cast<int>(positions.size() + 1)),
                    SpanNotFoundError);
  }
}

TEST_CASE("reverse_edits") {
  SUBCASE("single error reproduces original") {
    const CorruptedSample s = SingleErrorSample();
    CHECK(ReverseEdits(s) == s.original_text);
    CHECK(CheckSample(s).empty());
  }
  SUBCASE("hand-edited span not present") {
    CorruptedSample s = SingleErrorSample();
    s.errors[0].corrupted_span = "rigth";
    CHECK_THROWS_AS(ReverseEdits(s), SpanNotFoundError);
  }
  SUBCASE("mismatch reports first differing offset") {
    CorruptedSample s = SingleErrorSample();
    s.original_text = "Findings: There is a left pleural effusion!";
    try {
      ReverseEdits(s);
      FAIL("expected mismatch");
    } catch (const ReconstructionMismatchError& e) {
      CHECK(e.offset() == s.original_text.size() - 1);
    }
  }
  SUBCASE("repeated spans use the occurrence index") {
    CorruptedSample s;
    s.original_text = "Right apex. Left base.";
    s.corrupted_text = "Right apex. Right base.";
    s.errors.push_back({ErrorType::kSideConfusion, "Left", "Right", "d", 2});
    s.n_errors = 1;
    CHECK(ReverseEdits(s) == s.original_text);
    const auto tracked = ReverseEditsTracked(s);
    CHECK(tracked.original_offsets[0] == 12);
  }
  SUBCASE("multi-error offsets are tracked into the original text") {
    CorruptedSample s;
    s.original_text = "left lung. normal heart. right base.";
    // Applied left to right: left->right, then "normal"->"nromal", then right->left.
    s.corrupted_text = "right lung. nromal heart. left base.";
    s.errors.push_back({ErrorType::kSideConfusion, "left", "right", "d", 1});
    s.errors.push_back({ErrorType::kSpellingError, "normal", "nromal", "d", 1});
    s.errors.push_back({ErrorType::kSideConfusion, "right", "left", "d", 1});
    s.n_errors = 3;
    const auto tracked = ReverseEditsTracked(s);
    CHECK(tracked.text == s.original_text);
    for (size_t i = 0; i < 3; ++i) {
      CHECK(s.original_text.compare(tracked.original_offsets[i], s.errors[i].original_span.size(),
                                    s.errors[i].original_span) == 0);
    }
    CHECK(tracked.original_offsets[2] == s.original_text.find("right"));
  }
}

TEST_CASE("segment_sentences examples") {
  CHECK(SegmentSentences("").empty());
  CHECK(SegmentSentences("No effusion. Heart size normal.") ==
        std::vector<std::string>{"No effusion.", "Heart size normal."});
  CHECK(SegmentSentences("Nodule measures 5.4 cm. Stable.") ==
        std::vector<std::string>{"Nodule measures 5.4 cm.", "Stable."});
  CHECK(SegmentSentences("Seen by Dr. Smith. Stable.") ==
        std::vector<std::string>{"Seen by Dr. Smith.", "Stable."});
  CHECK(SegmentSentences("Compare e.g. Prior film. Done.") ==
        std::vector<std::string>{"Compare e.g. Prior film.", "Done."});
  CHECK(SegmentSentences("Signed by J. Doe at 9 a.m. Today.") ==
        std::vector<std::string>{"Signed by J. Doe at 9 a.m. Today."});
  CHECK(SegmentSentences("Is it new? 2 views. lower case stays.") ==
        std::vector<std::string>{"Is it new?", "2 views. lower case stays."});
  CHECK(SegmentSentences("Findings: Clear.\nImpression: Normal.") ==
        std::vector<std::string>{"Findings: Clear.", "Impression: Normal."});
}

TEST_CASE("segment_sentences is a partition") {
  Rng rng(11);
  const std::vector<std::string> pieces = {"Effusion", "5.4", "cm", ".", "Dr.", "e.g.", "x",
                                           "A.", "?",        "!",   "No", "  ", "\n", " "};
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    const size_t n = rng.Index(15);
    for (size_t i = 0; i < n; ++i) {
      text += pieces[rng.Index(pieces.size())];
      if (rng.Bernoulli(0.7)) text += " ";
    }
    const auto spans = SentenceSpans(text);
    size_t cursor = 0;
    std::string rebuilt;
    for (const auto& s : spans) {
      REQUIRE(s.begin >= cursor);
      for (size_t i = cursor; i < s.begin; ++i) CHECK(IsAsciiSpace(text[i]));
      rebuilt += text.substr(cursor, s.end - cursor);
      cursor = s.end;
    }
    for (size_t i = cursor; i < text.size(); ++i) CHECK(IsAsciiSpace(text[i]));
    rebuilt += text.substr(cursor);
    CHECK(rebuilt == text);
  }
}

TEST_CASE("parse_dataset") {
  SUBCASE("empty file") {
    const auto path = TempFile("reportfix_empty.jsonl", "");
    CHECK(ParseDataset(path).samples.empty());
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(ParseDataset("/nonexistent/reportfix.jsonl"), DatasetError);
  }
  SUBCASE("single record round-trips byte-identically") {
    const std::string line = SerializeSample(SingleErrorSample()) + "\n";
    const auto path = TempFile("reportfix_one.jsonl", line);
    const auto parsed = ParseDataset(path);
    REQUIRE(parsed.samples.size() == 1);
    CHECK(parsed.samples[0].n_errors == 1);
    CHECK(parsed.samples[0] == SingleErrorSample());
    CHECK(SerializeDataset(parsed.samples) == line);
  }
  SUBCASE("n_errors mismatch names the field") {
    CorruptedSample s = SingleErrorSample();
    s.original_text = "left and left";
    s.corrupted_text = "right and right";
    s.errors = {{ErrorType::kSideConfusion, "left", "right", "d", 2},
                {ErrorType::kSideConfusion, "left", "right", "d", 1}};
    s.n_errors = 3;
    const auto path = TempFile("reportfix_bad.jsonl", SerializeSample(s) + "\n");
    try {
      ParseDataset(path);
      FAIL("expected rejection");
    } catch (const DatasetError& e) {
      CHECK(e.field() == "n_errors");
      CHECK(e.line() == 1);
    }
    const auto lenient = ParseDataset(path, {.lenient = true});
    CHECK(lenient.samples.size() == 1);
    REQUIRE_FALSE(lenient.defects.empty());
    CHECK(lenient.defects[0].field == "n_errors");
  }
  SUBCASE("malformed line reports line number and field") {
    const std::string good = SerializeSample(SingleErrorSample());
    std::string bad = good;
    bad.replace(bad.find("\"side confusion\""), 16, "\"laterality\"");
    const auto path = TempFile("reportfix_malformed.jsonl", good + "\n" + bad + "\n{oops\n");
    try {
      ParseDataset(path);
      FAIL("expected rejection");
    } catch (const DatasetError& e) {
      CHECK(e.line() == 2);
      CHECK(e.field() == "errors[0].error_type");
    }
    const auto lenient = ParseDataset(path, {.lenient = true});
    CHECK(lenient.samples.size() == 1);
    CHECK(lenient.defects.size() == 2);
    CHECK(lenient.defects[1].line == 3);
  }
  SUBCASE("unknown fields are rejected") {
    std::string line = SerializeSample(SingleErrorSample());
    line.insert(1, "\"extra\":1,");
    CHECK_THROWS_AS(ParseDatasetText(line), DatasetError);
  }
}

TEST_CASE("error record invariants") {
  CHECK(CheckErrorRecord({ErrorType::kOmission, "acute ", "", "d", {}}).empty());
  CHECK_FALSE(CheckErrorRecord({ErrorType::kOther, "acute ", "", "d", {}}).empty());
  CHECK(CheckErrorRecord({ErrorType::kInsertion, "", "new", "d", {}}).empty());
  CHECK_FALSE(CheckErrorRecord({ErrorType::kOther, "", "new", "d", {}}).empty());
  CHECK_FALSE(CheckErrorRecord({ErrorType::kOther, "a", "a", "d", {}}).empty());
  CHECK_FALSE(CheckErrorRecord({ErrorType::kOther, "a", "b", "  ", {}}).empty());
  CHECK_FALSE(CheckReport({"r", "", ""}).empty());
  CHECK(Report{"r", "", "Normal."}.FlatText() == "Impression: Normal.");
  CHECK(Report{"r", "Clear.", "Normal."}.FlatText() == "Findings: Clear.\nImpression: Normal.");
}

}  // namespace
}  // namespace reportfix

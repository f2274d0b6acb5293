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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "detection_oracle.h"
#include "doctest.h"
#include "metric_oracles.h"
#include "reportfix/common/random.h"
#include "reportfix/eval/benchmark.h"
#include "reportfix/eval/correction_metrics.h"
#include "reportfix/eval/detection.h"
#include "reportfix/eval/prediction.h"
#include "reportfix/eval/scorer.h"
#include "reportfix/eval/tables.h"
#include "reportfix/forge/injection.h"
#include "reportfix/report/dataset.h"
#include "reportfix/reward/text_metrics.h"
#include "temp_dir.h"

namespace reportfix {
namespace {

constexpr auto kOm = ErrorType::kOmission;
constexpr auto kIns = ErrorType::kInsertion;
constexpr auto kSp = ErrorType::kSpellingError;
constexpr auto kSide = ErrorType::kSideConfusion;

CorruptedSample Gt(std::string id, std::vector<ErrorType> types) {
  CorruptedSample s;
  s.sample_id = std::move(id);
  for (ErrorType t : types) s.errors.push_back(ErrorRecord{t, "a", "b", "d", std::nullopt});
  s.n_errors = static_cast<int>(types.size());
  return s;
}

Prediction Pred(std::string id, std::vector<ErrorType> types) {
  Prediction p;
  p.sample_id = std::move(id);
  p.predicted_types = std::move(types);
  return p;
}

std::vector<CorruptedSample> Synth(uint64_t seed, size_t n) {
  InjectionConfig config;
  config.seed = seed;
  return SynthesizeRuleBased(GenerateCleanReports(seed, n), config);
}

std::string ReadAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST_CASE("detection examples") {
  SUBCASE("exact match") {
    const auto s = ComputeDetectionScores({Pred("s1", {kOm})}, {Gt("s1", {kOm})});
    CHECK(s.per_type[Index(kOm)].precision == 1.0);
    CHECK(s.per_type[Index(kOm)].recall == 1.0);
  }
  SUBCASE("two errors, one right") {
    const auto s = ComputeDetectionScores({Pred("s1", {kOm, kSp})}, {Gt("s1", {kOm, kIns})});
    CHECK(s.per_type[Index(kOm)].precision == 1.0);
    CHECK(s.per_type[Index(kOm)].recall == 1.0);
    CHECK(s.per_type[Index(kSp)].precision == 0.0);
    CHECK_FALSE(s.per_type[Index(kSp)].recall.has_value());
    CHECK(s.per_type[Index(kIns)].recall == 0.0);
    CHECK_FALSE(s.per_type[Index(kIns)].precision.has_value());
    CHECK(*s.macro_precision == doctest::Approx(0.5));
    CHECK(*s.macro_recall == doctest::Approx(0.5));
  }
  SUBCASE("no predictions at all") {
    const auto s = ComputeDetectionScores({Pred("a", {}), Pred("b", {})},
                                          {Gt("a", {kSide}), Gt("b", {kOm, kOm})});
    for (const auto& t : s.per_type) CHECK_FALSE(t.precision.has_value());
    CHECK(s.per_type[Index(kSide)].recall == 0.0);
    CHECK(s.per_type[Index(kOm)].recall == 0.0);
    CHECK(s.per_type[Index(kOm)].fn == 2);
    CHECK_FALSE(s.macro_precision.has_value());
    CHECK(s.macro_recall == 0.0);
  }
  SUBCASE("duplicate predictions consume one slot each") {
    const auto s = ComputeDetectionScores({Pred("a", {kOm, kOm, kOm})}, {Gt("a", {kOm, kOm})});
    CHECK(s.per_type[Index(kOm)].tp == 2);
    CHECK(s.per_type[Index(kOm)].fp == 1);
  }
  SUBCASE("id mismatch") {
    CHECK_THROWS_AS(ComputeDetectionScores({Pred("a", {})}, {Gt("b", {kOm})}), EvalInputError);
    CHECK_THROWS_AS(ComputeDetectionScores({Pred("a", {}), Pred("a", {})}, {Gt("a", {kOm})}),
                    EvalInputError);
    CHECK_THROWS_AS(ComputeDetectionScores({Pred("a", {}), Pred("b", {})}, {Gt("a", {kOm})}),
                    EvalInputError);
  }
}

TEST_CASE("detection scores equal the brute-force matcher") {
  Rng rng(99);
  for (int corpus = 0; corpus < 200; ++corpus) {
    std::vector<Prediction> preds;
    std::vector<CorruptedSample> truth;
    oracle::Counts expected;
    const size_t n = 1 + rng.Index(12);
    for (size_t i = 0; i < n; ++i) {
      auto draw = [&](size_t max) {
        std::vector<ErrorType> v(rng.Index(max + 1));
        for (auto& t : v) t = kAllErrorTypes[rng.Index(kNumErrorTypes)];
        return v;
      };
      std::vector<ErrorType> gt = draw(3);
      if (gt.empty()) gt.push_back(kAllErrorTypes[rng.Index(kNumErrorTypes)]);
      const std::vector<ErrorType> pred = draw(3);
      oracle::BruteForceSample(pred, gt, expected);
      truth.push_back(Gt("s" + std::to_string(i), gt));
      preds.push_back(Pred("s" + std::to_string(i), pred));
    }
    std::reverse(preds.begin(), preds.end());
    const auto s = ComputeDetectionScores(preds, truth);
    for (size_t t = 0; t < kNumErrorTypes; ++t) {
      CHECK(s.per_type[t].tp == expected.tp[t]);
      CHECK(s.per_type[t].fp == expected.fp[t]);
      CHECK(s.per_type[t].fn == expected.fn[t]);
      if (s.per_type[t].precision) {
        CHECK(*s.per_type[t].precision >= 0);
        CHECK(*s.per_type[t].precision <= 1);
      }
    }
  }
}

TEST_CASE("prediction records round trip") {
  testing::TempDir dir;
  Prediction a = Pred("x1", {kSide, kOm});
  a.raw_output = "<answer>side confusion, omission</answer>";
  a.corrected_text = "Findings: fine.";
  Prediction b = Pred("x2", {});
  b.error_note = "transport failed";
  WritePredictions(dir.path() / "p.jsonl", {a, b});
  CHECK(ReadPredictions(dir.path() / "p.jsonl") == std::vector<Prediction>{a, b});
  {
    std::ofstream out(dir.path() / "bad.jsonl");
    out << R"({"sample_id": "x", "predicted_types": ["laterality"]})" << "\n";
  }
  CHECK_THROWS_AS(ReadPredictions(dir.path() / "bad.jsonl"), EvalInputError);
  CHECK_THROWS_AS(ReadPredictions(dir.path() / "missing.jsonl"), EvalInputError);
}

TEST_CASE("report-level metrics") {
  SUBCASE("identity predictions") {
    const auto truth = Synth(4, 40);
    const auto t = ReportLevelMetrics(IdentityPredictions(truth), truth);
    CHECK(t.Overall("bleu") == doctest::Approx(1.0));
    CHECK(t.Overall("rouge_l") == doctest::Approx(1.0));
    CHECK_FALSE(t.Overall("bertscore").has_value());
    CHECK(t.rows.size() == 1 + kNumErrorTypes);
    CHECK(t.rows[0].n == 40);
  }
  SUBCASE("mean of independently computed sentence scores") {
    std::vector<CorruptedSample> truth;
    std::vector<Prediction> preds;
    const std::vector<std::pair<std::string, std::string>> texts = {
        {"Findings: The left lung is clear.", "Findings: The left lung is clear."},
        {"Findings: Mild cardiomegaly. No effusion.", "Findings: Mild cardiomegaly."},
        {"Impression: Stable right nodule, 5 mm.", "Impression: Stable left nodule, 5 mm."}};
    double expected_bleu = 0, expected_rouge = 0;
    for (size_t i = 0; i < texts.size(); ++i) {
      CorruptedSample s = Gt("r" + std::to_string(i), {kOm});
      s.original_text = texts[i].first;
      truth.push_back(s);
      Prediction p = Pred(s.sample_id, {kOm});
      p.corrected_text = texts[i].second;
      preds.push_back(p);
      expected_bleu += oracle::Bleu(texts[i].second, texts[i].first) / 3;
      expected_rouge += oracle::RougeL(texts[i].second, texts[i].first) / 3;
    }
    const auto t = ReportLevelMetrics(preds, truth);
    CHECK(std::abs(*t.Overall("bleu") - expected_bleu) < 1e-6);
    CHECK(std::abs(*t.Overall("rouge_l") - expected_rouge) < 1e-6);
  }
  SUBCASE("missing correction falls back to the raw output") {
    auto truth = Synth(5, 3);
    auto preds = IdentityPredictions(truth);
    preds[1].corrected_text.clear();
    preds[1].raw_output = "unparsable";
    const auto t = ReportLevelMetrics(preds, truth);
    CHECK(t.fallback_count == 1);
    CHECK(*t.Overall("bleu") < 1.0);
  }
  SUBCASE("empty corpus") {
    const auto t = ReportLevelMetrics({}, {});
    CHECK(t.rows.empty());
    CHECK(t.metrics.size() == kStandardMetrics.size());
  }
}

// Independent tie-break oracle for sentence pairing.
size_t OraclePair(const std::string& target, size_t target_index,
                  const std::vector<std::string>& cands) {
  std::vector<std::tuple<double, size_t, size_t>> keyed;
  for (size_t j = 0; j < cands.size(); ++j) {
    const auto a = oracle::Tokenize(cands[j]);
    auto b = oracle::Tokenize(target);
    double f1 = 0;
    if (!a.empty() && !b.empty()) {
      size_t overlap = 0;
      for (const auto& tok : a) {
        auto it = std::find(b.begin(), b.end(), tok);
        if (it != b.end()) {
          b.erase(it);
          ++overlap;
        }
      }
      const double p = static_cast<double>(overlap) / a.size();
      const double r = static_cast<double>(overlap) / oracle::Tokenize(target).size();
      f1 = overlap ? 2 * p * r / (p + r) : 0;
    }
    const size_t dist = j > target_index ? j - target_index : target_index - j;
    keyed.emplace_back(-f1, dist, j);
  }
  return std::get<2>(*std::min_element(keyed.begin(), keyed.end()));
}

TEST_CASE("sentence pairing") {
  const std::vector<std::string> two = {"The left lung is clear.", "The right lung is clear."};
  CHECK(PairSentence("The right lung is clear.", 0, two) == 1u);
  CHECK(PairSentence("The lung is clear.", 0, two) == 0u);
  CHECK(PairSentence("The lung is clear.", 1, two) == 1u);
  CHECK_FALSE(PairSentence("x", 0, {}).has_value());

  Rng rng(8);
  const std::vector<std::string> words = {"left", "right", "lung", "is", "clear", "no", "effusion"};
  for (int trial = 0; trial < 300; ++trial) {
    auto sentence = [&] {
      std::string s;
      for (size_t i = 0, n = 1 + rng.Index(5); i < n; ++i) s += words[rng.Index(words.size())] + " ";
      return s + ".";
    };
    std::vector<std::string> cands(1 + rng.Index(4));
    for (auto& c : cands) c = sentence();
    const std::string target = sentence();
    const size_t ti = rng.Index(4);
    CHECK(*PairSentence(target, ti, cands) == OraclePair(target, ti, cands));
  }
}

TEST_CASE("sentence-level metrics") {
  const auto truth = Synth(6, 60);
  SUBCASE("identity predictions") {
    const auto t = SentenceLevelMetrics(IdentityPredictions(truth), truth);
    size_t errors = 0;
    for (const auto& s : truth) errors += s.errors.size();
    CHECK(t.rows[0].n == errors);
    CHECK(t.Overall("bleu") == doctest::Approx(1.0));
    CHECK(t.Overall("rouge_l") == doctest::Approx(1.0));
  }
  SUBCASE("target sentence deleted") {
    CorruptedSample s;
    s.sample_id = "one";
    s.original_text = "Findings: The heart is normal. The left lung is clear. No effusion.";
    s.corrupted_text = "Findings: The heart is normal. The right lung is clear. No effusion.";
    s.errors = {ErrorRecord{kSide, "left", "right", "side swapped", std::nullopt}};
    s.n_errors = 1;
    Prediction p = Pred("one", {kSide});
    p.corrected_text = "Findings: The heart is normal. No effusion.";
    const auto t = SentenceLevelMetrics({p}, {s});
    CHECK(*t.Overall("bleu") < 1.0);
    p.corrected_text = s.original_text;
    CHECK(*SentenceLevelMetrics({p}, {s}).Overall("bleu") == doctest::Approx(1.0));
  }
  SUBCASE("unlocatable span") {
    CorruptedSample s = Gt("bad", {kSide});
    s.original_text = "Findings: clear.";
    s.corrupted_text = "Findings: clear.";
    CHECK_THROWS_AS(SentenceLevelMetrics(IdentityPredictions({s}), {s}), EvalInputError);
  }
  SUBCASE("sentence for span") {
    const std::string text = "Findings: A is fine. B is small. C.";
    CHECK(SentenceForSpan(text, text.find("fine. B is small"), text.find("fine. B is small") + 16) == 1);
    CHECK(SentenceForSpan(text, text.find("A"), text.find("A") + 1) == 0);
    CHECK(SentenceForSpan(text, text.find("C"), text.find("C")) == 2);
  }
}

TEST_CASE("scorer plugins") {
  const std::string exe = REPORTFIX_FAKE_SCORER;
  const std::vector<ScorePair> pairs = {{"a", "x y", "x y"}, {"b", "x", "y"}, {"c", "", "z"}};
  SUBCASE("well-behaved plugin") {
    SubprocessScorer s({"bertscore", {exe, "exact"}});
    CHECK(s.ScoreBatch(pairs) == std::vector<double>{1.0, 0.25, 0.25});
    CHECK(s.ScoreBatch({}).empty());
  }
  SUBCASE("large batch does not deadlock") {
    std::vector<ScorePair> many;
    for (int i = 0; i < 5000; ++i) many.push_back({std::to_string(i), std::string(200, 'a'), "b"});
    SubprocessScorer s({"bertscore", {exe, "exact"}});
    CHECK(s.ScoreBatch(many).size() == many.size());
  }
  for (const char* mode : {"crash", "wrong-id", "short", "out-of-range", "garbage"}) {
    CAPTURE(mode);
    SubprocessScorer s({"bertscore", {exe, mode}});
    CHECK_THROWS_AS(s.ScoreBatch(pairs), ScorerError);
  }
  SUBCASE("timeout") {
    SubprocessScorer s({"bertscore", {exe, "slow"}, 0.3});
    const auto t0 = std::chrono::steady_clock::now();
    CHECK_THROWS_AS(s.ScoreBatch(pairs), ScorerError);
    CHECK(std::chrono::steady_clock::now() - t0 < std::chrono::seconds(3));
  }
  SUBCASE("missing program") {
    SubprocessScorer s({"bertscore", {"/nonexistent/scorer"}});
    CHECK_THROWS_AS(s.ScoreBatch(pairs), ScorerError);
  }
  SUBCASE("in tables") {
    const auto truth = Synth(7, 10);
    auto preds = IdentityPredictions(truth);
    preds[0].corrected_text = "different";
    SubprocessScorer good({"sembscore", {exe, "exact"}});
    SubprocessScorer custom({"my_metric", {exe, "exact"}});
    SubprocessScorer broken({"radgraph_f1", {exe, "crash"}});
    const auto t = ReportLevelMetrics(preds, truth, {&good, &custom, &broken});
    CHECK(t.metrics.back() == "my_metric");
    CHECK(*t.Overall("sembscore") == doctest::Approx((9 + 0.25) / 10));
    CHECK(*t.Overall("my_metric") == doctest::Approx((9 + 0.25) / 10));
    CHECK_FALSE(t.Overall("radgraph_f1").has_value());
    const bool noted = std::any_of(t.notes.begin(), t.notes.end(), [](const std::string& n) {
      return n.find("radgraph_f1") != std::string::npos && n.find("unavailable") != std::string::npos;
    });
    CHECK(noted);
  }
}

// Answers as a perfect model would, after a short delay, and records the
// peak number of concurrent calls.
class MockBenchClient : public ChatClient {
 public:
  MockBenchClient(const std::vector<CorruptedSample>& truth, std::string mode)
      : truth_(truth), mode_(std::move(mode)) {}
  std::string Complete(const ChatRequest& request) override {
    const int now = ++in_flight_;
    {
      std::lock_guard<std::mutex> lock(mu_);
      peak_ = std::max(peak_, now);
      ++calls_;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(mode_ == "slow" ? 5 : 0));
    --in_flight_;
    if (mode_ == "down") throw TransportError("connection refused");
    if (mode_ == "malformed") return "I think the report is fine.";
    for (const auto& s : truth_) {
      if (request.messages.back().content.find(s.corrupted_text) == std::string::npos) continue;
      std::string types;
      for (const auto& e : s.errors) types += (types.empty() ? "" : ", ") + std::string(ToString(e.error_type));
      return "<think>checked</think><answer>" + types + "</answer>\n<answer>" + s.original_text +
             "</answer>";
    }
    return "";
  }
  int peak() const { return peak_; }
  int calls() const { return calls_; }

 private:
  const std::vector<CorruptedSample>& truth_;
  std::string mode_;
  std::atomic<int> in_flight_{0};
  std::mutex mu_;
  int peak_ = 0;
  int calls_ = 0;
};

TEST_CASE("benchmark harness") {
  const auto truth = Synth(11, 100);
  BenchmarkConfig config;
  config.concurrency_limit = 4;

  SUBCASE("closed loop with a perfect model") {
    MockBenchClient client(truth, "slow");
    const auto preds = RunBenchmark(client, truth, config);
    REQUIRE(preds.size() == truth.size());
    for (size_t i = 0; i < truth.size(); ++i) CHECK(preds[i].sample_id == truth[i].sample_id);
    CHECK(client.peak() <= 4);
    CHECK(client.peak() >= 2);
    const auto d = ComputeDetectionScores(preds, truth);
    CHECK(d.macro_precision == doctest::Approx(1.0));
    CHECK(d.macro_recall == doctest::Approx(1.0));
    CHECK(ReportLevelMetrics(preds, truth).Overall("bleu") == doctest::Approx(1.0));
  }
  SUBCASE("malformed answers count as misses") {
    MockBenchClient client(truth, "malformed");
    const auto preds = RunBenchmark(client, truth, config);
    for (const auto& p : preds) CHECK(p.predicted_types.empty());
    const auto d = ComputeDetectionScores(preds, truth);
    size_t fn = 0, gt = 0;
    for (const auto& t : d.per_type) fn += t.fn;
    for (const auto& s : truth) gt += s.errors.size();
    CHECK(fn == gt);
  }
  SUBCASE("transport failures are retried then noted") {
    MockBenchClient client(truth, "down");
    config.max_retries = 2;
    const auto preds = RunBenchmark(client, std::vector<CorruptedSample>(truth.begin(), truth.begin() + 5), config);
    CHECK(client.calls() == 15);
    for (const auto& p : preds) {
      REQUIRE(p.error_note.has_value());
      CHECK(p.error_note->find("connection refused") != std::string::npos);
      CHECK(p.predicted_types.empty());
    }
  }
  SUBCASE("image reference") {
    config.image_ref_template = "images/{id}.png";
    CHECK(BuildBenchPrompt("R", std::string("images/r1.png")).find("images/r1.png") != std::string::npos);
    MockBenchClient client(truth, "slow");
    CHECK(RunBenchmark(client, truth, config).size() == truth.size());
  }
  SUBCASE("response parsing") {
    const auto p = ParseBenchResponse(
        "q", "<answer>Side confusion; omission\nbogus</answer> text <answer> Fixed report. </answer>");
    CHECK(p.predicted_types == std::vector<ErrorType>{kSide, kOm});
    CHECK(p.corrected_text == "Fixed report.");
    CHECK(ParseBenchResponse("q", "<answer>omission</answer>").corrected_text.empty());
  }
  CHECK_THROWS_AS(ValidateBenchmarkConfig(BenchmarkConfig{"m", 0.0, 3, 0, {}}), std::invalid_argument);
}

DetectionScores FixtureDetection() {
  return DetectionScoresFromPairs({{{kOm}, {kOm}},
                                   {{kOm, kSp}, {kOm, kIns}},
                                   {{kSide}, {kSide}},
                                   {{}, {kSide}}});
}

MetricsTable FixtureMetrics() {
  MetricsTable t;
  auto row = [&](std::string g, size_t n, double base) {
    MetricRow r{std::move(g), n, {}};
    for (size_t m = 0; m < t.metrics.size(); ++m) {
      r.values.push_back(m == 3 || n == 0 ? std::nullopt : std::optional<double>(base / (m + 1)));
    }
    return r;
  };
  t.rows = {row("all", 4, 0.9), row("omission", 2, 0.8), row("insertion", 1, 1.0),
            row("spelling error", 0, 0), row("side confusion", 1, 0.5), row("other", 0, 0)};
  t.fallback_count = 1;
  t.notes = {"sembscore: no scorer configured"};
  return t;
}

TEST_CASE("tables match golden files") {
  testing::TempDir dir;
  const auto files = EmitTables(FixtureDetection(), FixtureMetrics(), MetricsTable{}, dir.path());
  CHECK(files.size() == 6);
  const std::filesystem::path golden = std::filesystem::path(REPORTFIX_TEST_DATA_DIR) / "golden";
  if (std::getenv("REPORTFIX_UPDATE_GOLDEN")) {
    for (const auto& f : files) {
      std::filesystem::copy_file(f, golden / f.filename(),
                                 std::filesystem::copy_options::overwrite_existing);
    }
  }
  for (const auto& f : files) {
    CAPTURE(f.filename().string());
    CHECK(ReadAll(f) == ReadAll(golden / f.filename()));
  }
  // Detection tables always have the five types and a macro row.
  std::istringstream csv(DetectionCsv(DetectionScores{}));
  size_t lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines == 1 + kNumErrorTypes + 1);
  MetricsTable empty;
  CHECK(MetricsCsv(empty) ==
        "group,n,bleu,rouge_l,bertscore,sembscore,chexbert_f1,radgraph_f1\n");
  CHECK_THROWS(EmitTables(FixtureDetection(), empty, empty, "/proc/no/such/dir"));
}

}  // namespace
}  // namespace reportfix

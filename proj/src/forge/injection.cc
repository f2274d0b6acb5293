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

#include "reportfix/forge/injection.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <numeric>
#include <optional>
#include <thread>

#include "reportfix/common/parallel.h"
#include "reportfix/common/strings.h"
#include "reportfix/report/sentences.h"

namespace reportfix {
namespace {

constexpr std::array<std::string_view, 30> kInsertionPool = {
    "Mild pulmonary vascular congestion is present.",
    "There is a small hiatal hernia.",
    "Linear atelectasis is noted at the lung bases.",
    "A small calcified granuloma is seen.",
    "There is mild interstitial edema.",
    "Degenerative changes are seen in the thoracic spine.",
    "The aorta is tortuous and calcified.",
    "There is blunting of the costophrenic angle.",
    "Patchy opacity is seen in the lingula.",
    "A nasogastric tube terminates in the stomach.",
    "There is a small amount of subcutaneous emphysema.",
    "Bibasilar opacities likely reflect atelectasis.",
    "The hila are prominent.",
    "There is mild cardiomegaly.",
    "A pacemaker is present with leads in standard position.",
    "Sternotomy wires are intact.",
    "There is a moderate pericardial effusion.",
    "Diffuse reticular opacities are present.",
    "Surgical clips project over the upper abdomen.",
    "There is elevation of the hemidiaphragm.",
    "A rounded opacity projects over the midlung.",
    "There is mild bronchial wall thickening.",
    "An endotracheal tube terminates above the carina.",
    "Healed rib fractures are noted.",
    "There is a small apical pneumothorax.",
    "Hyperinflation suggests chronic obstructive disease.",
    "There is new consolidation in the lower lobe.",
    "Vascular markings are indistinct.",
    "A small nodular opacity is newly seen.",
    "There is widening of the mediastinum.",
};

constexpr std::array<std::string_view, 6> kLateralityWords = {"left", "right", "Left",
                                                               "Right", "LEFT", "RIGHT"};

struct Site {
  ErrorType type = ErrorType::kOther;
  size_t begin = 0;  // in the original text
  size_t end = 0;
  std::string original;
  std::string corrupted;
  std::string description;
};

struct Range {
  size_t begin;
  size_t end;
};

std::string Quote(std::string_view s) { return "\"" + std::string(s) + "\""; }

// "Findings:" and "Impression:" style headers are never edited.
bool IsHeaderWord(std::string_view text, size_t begin, size_t end) {
  return end < text.size() && text[end] == ':' && begin < end && IsAsciiUpper(text[begin]);
}

bool StartsWithHeader(std::string_view text, size_t begin) {
  size_t e = begin;
  while (e < text.size() && IsAsciiAlpha(text[e])) ++e;
  return e > begin && IsHeaderWord(text, begin, e);
}

std::vector<Range> AlphaRuns(std::string_view text) {
  std::vector<Range> runs;
  size_t i = 0;
  while (i < text.size()) {
    if (!IsAsciiAlpha(text[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size() && IsAsciiAlpha(text[j])) ++j;
    // Skip runs glued to digits or UTF-8 bytes; those are not plain words.
    const bool clean_left = i == 0 || !(IsAsciiDigit(text[i - 1]) || (text[i - 1] & 0x80));
    const bool clean_right = j == text.size() || !(IsAsciiDigit(text[j]) || (text[j] & 0x80));
    if (clean_left && clean_right) runs.push_back({i, j});
    i = j;
  }
  return runs;
}

// Start of the whitespace-delimited word that ends at `end`.
size_t WordStartBefore(std::string_view text, size_t end) {
  size_t b = end;
  while (b > 0 && !IsAsciiSpace(text[b - 1])) --b;
  return b;
}

size_t WordEndAfter(std::string_view text, size_t begin) {
  size_t e = begin;
  while (e < text.size() && !IsAsciiSpace(text[e])) ++e;
  return e;
}

std::string SwapSide(std::string_view w) {
  if (w == "left") return "right";
  if (w == "right") return "left";
  if (w == "Left") return "Right";
  if (w == "Right") return "Left";
  if (w == "LEFT") return "RIGHT";
  return "LEFT";
}

std::vector<Site> SideSites(std::string_view text) {
  std::vector<Site> sites;
  for (const Range& r : AlphaRuns(text)) {
    const std::string_view w = text.substr(r.begin, r.end - r.begin);
    if (std::find(kLateralityWords.begin(), kLateralityWords.end(), w) == kLateralityWords.end()) {
      continue;
    }
    std::string swapped = SwapSide(w);
    std::string desc = "Side confusion: " + Quote(w) + " was changed to " + Quote(swapped) + ".";
    sites.push_back({ErrorType::kSideConfusion, r.begin, r.end, std::string(w), std::move(swapped),
                     std::move(desc)});
  }
  return sites;
}

std::string Misspell(std::string_view word, Rng& rng) {
  std::string out(word);
  for (int attempt = 0; attempt < 16; ++attempt) {
    out = std::string(word);
    switch (rng.Index(3)) {
      case 0: {  // transpose two adjacent characters
        const size_t i = 1 + rng.Index(out.size() - 2);
        std::swap(out[i], out[i + 1]);
        break;
      }
      case 1:
      case 2: {  // substitute one or two characters
        const int count = rng.Bernoulli(0.5) ? 1 : 2;
        for (int k = 0; k < count; ++k) {
          const size_t i = 1 + rng.Index(out.size() - 1);
          const bool upper = IsAsciiUpper(out[i]);
          char c = static_cast<char>('a' + rng.Index(26));
          if (upper) c = static_cast<char>(c - 'a' + 'A');
          out[i] = c;
        }
        break;
      }
    }
    if (out != word) return out;
  }
  // Deterministic fallback: rotate the last two characters' roles.
  out = std::string(word);
  out[out.size() - 1] = out[out.size() - 1] == 'x' ? 'y' : 'x';
  return out;
}

std::vector<Site> SpellingSites(std::string_view text, Rng& rng) {
  std::vector<Site> sites;
  for (const Range& r : AlphaRuns(text)) {
    if (r.end - r.begin < 5 || IsHeaderWord(text, r.begin, r.end)) continue;
    const std::string_view w = text.substr(r.begin, r.end - r.begin);
    std::string typo = Misspell(w, rng);
    std::string desc = "Spelling error: " + Quote(w) + " was misspelled as " + Quote(typo) + ".";
    sites.push_back({ErrorType::kSpellingError, r.begin, r.end, std::string(w), std::move(typo),
                     std::move(desc)});
  }
  return sites;
}

bool EndsWithTerminator(std::string_view text, const SentenceSpan& s) {
  const char c = text[s.end - 1];
  return c == '.' || c == '?' || c == '!';
}

std::vector<Site> OmissionSites(std::string_view text) {
  std::vector<Site> sites;
  const auto spans = SentenceSpans(text);
  auto make = [&](size_t begin, size_t end, size_t keep_begin, size_t keep_end,
                  std::string_view removed) {
    std::string original(text.substr(begin, end - begin));
    std::string corrupted(text.substr(keep_begin, keep_end - keep_begin));
    std::string desc = "Omission: " + Quote(StripAsciiWhitespace(removed)) + " was removed.";
    sites.push_back({ErrorType::kOmission, begin, end, std::move(original), std::move(corrupted),
                     std::move(desc)});
  };
  if (spans.size() >= 2) {
    for (size_t i = 0; i < spans.size(); ++i) {
      if (StartsWithHeader(text, spans[i].begin)) continue;
      if (i > 0) {
        const size_t anchor = WordStartBefore(text, spans[i - 1].end);
        make(anchor, spans[i].end, anchor, spans[i - 1].end,
             text.substr(spans[i].begin, spans[i].end - spans[i].begin));
      } else {
        const size_t next_word_end = WordEndAfter(text, spans[1].begin);
        make(spans[0].begin, next_word_end, spans[1].begin, next_word_end,
             text.substr(spans[0].begin, spans[0].end - spans[0].begin));
      }
    }
  }
  // Trailing clauses introduced by ", ".
  for (const SentenceSpan& s : spans) {
    const size_t body_end = EndsWithTerminator(text, s) ? s.end - 1 : s.end;
    for (size_t c = s.begin; c < body_end; ++c) {
      if (text[c] != ',' || c + 1 >= body_end || text[c + 1] != ' ') continue;
      size_t clause_end = text.find(',', c + 1);
      if (clause_end == std::string_view::npos || clause_end > body_end) clause_end = body_end;
      if (clause_end <= c + 2) continue;
      const size_t anchor = WordStartBefore(text, c);
      if (anchor == c) continue;
      make(anchor, clause_end, anchor, c, text.substr(c + 1, clause_end - c - 1));
    }
  }
  return sites;
}

std::vector<Site> InsertionSites(std::string_view text, Rng& rng,
                                 const std::vector<std::string>& pool) {
  std::vector<Site> sites;
  std::vector<std::string_view> available;
  for (const std::string& p : pool) {
    if (text.find(p) == std::string_view::npos) available.push_back(p);
  }
  if (available.empty()) return sites;
  for (const SentenceSpan& s : SentenceSpans(text)) {
    if (!EndsWithTerminator(text, s)) continue;
    const size_t anchor = WordStartBefore(text, s.end);
    const std::string_view inserted = available[rng.Index(available.size())];
    std::string original(text.substr(anchor, s.end - anchor));
    std::string corrupted = original + " " + std::string(inserted);
    std::string desc = "Insertion: " + Quote(inserted) + " was added after " + Quote(original) + ".";
    sites.push_back({ErrorType::kInsertion, anchor, s.end, std::move(original), std::move(corrupted),
                     std::move(desc)});
  }
  return sites;
}

std::vector<Site> OtherSites(std::string_view text) {
  std::vector<Site> sites;
  for (const Range& r : AlphaRuns(text)) {
    const std::string_view w = text.substr(r.begin, r.end - r.begin);
    if (w != "cm" && w != "mm") continue;
    std::string swapped = w == "cm" ? "mm" : "cm";
    std::string desc = "Other: the unit " + Quote(w) + " was changed to " + Quote(swapped) + ".";
    sites.push_back({ErrorType::kOther, r.begin, r.end, std::string(w), std::move(swapped),
                     std::move(desc)});
  }
  for (const SentenceSpan& s : SentenceSpans(text)) {
    if (text[s.end - 1] != '.') continue;
    const size_t anchor = WordStartBefore(text, s.end);
    if (s.end - anchor < 2) continue;
    std::string original(text.substr(anchor, s.end - anchor));
    std::string corrupted = original;
    corrupted.back() = ',';
    std::string desc = "Other: punctuation in " + Quote(original) + " was changed to " +
                       Quote(corrupted) + ".";
    sites.push_back({ErrorType::kOther, anchor, s.end, std::move(original), std::move(corrupted),
                     std::move(desc)});
  }
  return sites;
}

bool Conflicts(const Site& a, const Site& b) {
  // Edits must be separated by at least one untouched byte.
  return a.begin <= b.end && b.begin <= a.end;
}

// 1-based index of the match of `span` starting at `pos`.
int OccurrenceAt(std::string_view text, std::string_view span, size_t pos) {
  int k = 1;
  for (size_t p = text.find(span); p != std::string_view::npos && p < pos; p = text.find(span, p + 1)) {
    ++k;
  }
  return k;
}

}  // namespace

void ValidateInjectionConfig(const InjectionConfig& config) {
  double type_sum = 0;
  for (double w : config.type_weights) {
    if (!(w >= 0)) throw std::invalid_argument("type_weights must be non-negative");
    type_sum += w;
  }
  if (!(type_sum > 0)) throw std::invalid_argument("type_weights must have a positive sum");
  if (!(config.multi_error_rate >= 0 && config.multi_error_rate <= 1)) {
    throw std::invalid_argument("multi_error_rate must lie in [0, 1]");
  }
  double multi_sum = 0;
  for (double w : config.multi_count_weights) {
    if (!(w >= 0)) throw std::invalid_argument("multi_count_weights must be non-negative");
    multi_sum += w;
  }
  if (!(multi_sum > 0)) throw std::invalid_argument("multi_count_weights must have a positive sum");
}

ErrorPlan SampleErrorPlan(const InjectionConfig& config, Rng& rng) {
  ErrorPlan plan;
  plan.n_errors = 1;
  if (rng.Uniform() < config.multi_error_rate) {
    plan.n_errors = rng.Categorical(config.multi_count_weights) == 0 ? 2 : 3;
  }
  for (int i = 0; i < plan.n_errors; ++i) {
    plan.types.push_back(kAllErrorTypes[rng.Categorical(config.type_weights)]);
  }
  return plan;
}

NoInjectableSiteError::NoInjectableSiteError(ErrorType type)
    : std::runtime_error("no injectable site for " + std::string(ToString(type))), type_(type) {}

std::span<const std::string_view> BuiltinInsertionPool() { return kInsertionPool; }

CorruptedSample InjectRuleBased(std::string_view original_text, const ErrorPlan& plan, Rng& rng,
                                const RuleInjectorOptions& options) {
  std::vector<std::string> pool = options.insertion_pool;
  if (pool.empty()) pool.assign(kInsertionPool.begin(), kInsertionPool.end());

  std::array<std::optional<std::vector<Site>>, kNumErrorTypes> candidates;
  auto sites_for = [&](ErrorType t) -> const std::vector<Site>& {
    auto& slot = candidates[Index(t)];
    if (!slot) {
      switch (t) {
        case ErrorType::kSideConfusion:
          slot = SideSites(original_text);
          break;
        case ErrorType::kSpellingError:
          slot = SpellingSites(original_text, rng);
          break;
        case ErrorType::kOmission:
          slot = OmissionSites(original_text);
          break;
        case ErrorType::kInsertion:
          slot = InsertionSites(original_text, rng, pool);
          break;
        case ErrorType::kOther:
          slot = OtherSites(original_text);
          break;
      }
    }
    return *slot;
  };
  for (ErrorType t : plan.types) {
    if (sites_for(t).empty()) throw NoInjectableSiteError(t);
  }

  std::vector<Site> chosen;
  for (int draw = 0; draw < std::max(1, options.max_site_draws); ++draw) {
    chosen.clear();
    bool ok = true;
    for (ErrorType t : plan.types) {
      std::vector<const Site*> free;
      for (const Site& s : sites_for(t)) {
        const bool clash = std::any_of(chosen.begin(), chosen.end(),
                                       [&](const Site& c) { return Conflicts(c, s); });
        if (!clash) free.push_back(&s);
      }
      if (free.empty()) {
        ok = false;
        break;
      }
      chosen.push_back(*free[rng.Index(free.size())]);
    }
    if (ok) break;
    if (draw + 1 == std::max(1, options.max_site_draws)) {
      throw NoInjectableSiteError(plan.types.back());
    }
  }
  std::sort(chosen.begin(), chosen.end(),
            [](const Site& a, const Site& b) { return a.begin < b.begin; });

  CorruptedSample sample;
  sample.original_text = std::string(original_text);
  std::string text(original_text);
  std::ptrdiff_t shift = 0;
  for (const Site& s : chosen) {
    const size_t pos = static_cast<size_t>(static_cast<std::ptrdiff_t>(s.begin) + shift);
    text.replace(pos, s.original.size(), s.corrupted);
    shift += static_cast<std::ptrdiff_t>(s.corrupted.size()) -
             static_cast<std::ptrdiff_t>(s.original.size());
    ErrorRecord record{s.type, s.original, s.corrupted, s.description, std::nullopt};
    const int occurrence = OccurrenceAt(text, s.corrupted, pos);
    if (occurrence > 1) record.occurrence = occurrence;
    sample.errors.push_back(std::move(record));
  }
  sample.corrupted_text = std::move(text);
  sample.n_errors = static_cast<int>(sample.errors.size());
  return sample;
}

CorruptedSample InjectRuleBased(const Report& report, const ErrorPlan& plan, Rng& rng,
                                const RuleInjectorOptions& options) {
  CorruptedSample s = InjectRuleBased(report.FlatText(), plan, rng, options);
  s.source_report_id = report.report_id;
  return s;
}

std::vector<CorruptedSample> SynthesizeRuleBased(const std::vector<CleanReport>& reports,
                                                 const InjectionConfig& config,
                                                 const RuleInjectorOptions& options,
                                                 int max_replans, SynthesisStats* stats) {
  ValidateInjectionConfig(config);
  struct Outcome {
    std::optional<CorruptedSample> sample;
    size_t replans = 0;
  };
  const size_t workers = std::max(1u, std::thread::hardware_concurrency());
  auto outcomes = OrderedParallelMap<Outcome>(reports.size(), workers, [&](size_t i) {
    Outcome out;
    Rng rng(config.seed, i);
    for (int attempt = 0; attempt <= max_replans; ++attempt) {
      const ErrorPlan plan = SampleErrorPlan(config, rng);
      try {
        CorruptedSample s = InjectRuleBased(reports[i].flat_text, plan, rng, options);
        char id[32];
        std::snprintf(id, sizeof(id), "s%06zu", i);
        s.sample_id = id;
        s.source_report_id = reports[i].report_id;
        s.split = reports[i].split;
        out.sample = std::move(s);
        return out;
      } catch (const NoInjectableSiteError&) {
        ++out.replans;
      }
    }
    return out;
  });

  std::vector<CorruptedSample> samples;
  samples.reserve(outcomes.size());
  SynthesisStats local;
  for (auto& o : outcomes) {
    local.replans += o.replans;
    if (o.sample) {
      samples.push_back(std::move(*o.sample));
    } else {
      ++local.skipped_reports;
    }
  }
  if (stats) *stats = local;
  return samples;
}

std::vector<CleanReport> GenerateCleanReports(uint64_t seed, size_t count) {
  static constexpr std::array<std::string_view, 6> kFindings = {
      "pleural effusion", "basilar atelectasis", "lower lobe opacity", "apical pneumothorax",
      "hilar prominence", "upper lobe nodule"};
  static constexpr std::array<std::string_view, 4> kSizes = {"small", "moderate", "large", "trace"};
  static constexpr std::array<std::string_view, 6> kNormals = {
      "Heart size is normal.", "The mediastinal contours are unremarkable.",
      "No pneumothorax is identified.", "The osseous structures are intact.",
      "Pulmonary vasculature is within normal limits.", "No focal consolidation is seen."};
  static constexpr std::array<std::string_view, 3> kChanges = {"unchanged", "increased",
                                                                "decreased"};
  std::vector<CleanReport> reports;
  reports.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    Rng rng(seed, i);
    const std::string side = rng.Bernoulli(0.5) ? "left" : "right";
    const std::string other_side = side == "left" ? "right" : "left";
    const std::string_view finding = kFindings[rng.Index(kFindings.size())];
    const std::string_view size = kSizes[rng.Index(kSizes.size())];
    const int whole = 1 + static_cast<int>(rng.Index(6));
    const int tenth = static_cast<int>(rng.Index(10));
    const std::string unit = rng.Bernoulli(0.7) ? "cm" : "mm";

    std::string findings = "There is a " + std::string(size) + " " + side + " " +
                           std::string(finding) + ", measuring " + std::to_string(whole) + "." +
                           std::to_string(tenth) + " " + unit + ".";
    std::array<size_t, kNormals.size()> order;
    std::iota(order.begin(), order.end(), 0);
    for (size_t k = order.size() - 1; k > 0; --k) std::swap(order[k], order[rng.Index(k + 1)]);
    const size_t normals = 1 + rng.Index(3);
    for (size_t k = 0; k < normals; ++k) findings += " " + std::string(kNormals[order[k]]);
    if (rng.Bernoulli(0.5)) {
      findings += " The " + other_side + " lung is clear, without effusion.";
    } else {
      findings += " No " + other_side + " sided effusion is present.";
    }

    std::string impression = std::string(1, static_cast<char>(std::toupper(side[0]))) +
                             side.substr(1) + " " + std::string(finding) + ", " +
                             std::string(kChanges[rng.Index(kChanges.size())]) +
                             " from prior.";

    char id[32];
    std::snprintf(id, sizeof(id), "r%06zu", i);
    Report report{id, std::move(findings), std::move(impression)};
    reports.push_back({report.report_id, report.FlatText(), i % 10 == 9 ? Split::kTest : Split::kTrain});
  }
  return reports;
}

}  // namespace reportfix

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

#include "reportfix/reward/text_metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "reportfix/common/strings.h"

namespace reportfix {
namespace {

using NgramCounts = std::map<std::vector<std::string_view>, int>;

NgramCounts CountNgrams(std::span<const std::string> tokens, size_t n) {
  NgramCounts counts;
  if (tokens.size() < n) return counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    std::vector<std::string_view> gram(tokens.begin() + i, tokens.begin() + i + n);
    ++counts[std::move(gram)];
  }
  return counts;
}

size_t LcsLength(std::span<const std::string> a, std::span<const std::string> b) {
  std::vector<size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

std::vector<std::string> MetricTokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char c : text) {
    if (IsAsciiSpace(c)) {
      flush();
    } else if (IsAsciiPunct(c)) {
      flush();
      tokens.emplace_back(1, c);
    } else {
      current.push_back(IsAsciiUpper(c) ? static_cast<char>(c - 'A' + 'a') : c);
    }
  }
  flush();
  return tokens;
}

double BleuTokens(std::span<const std::string> candidate, std::span<const std::string> reference) {
  const size_t c = candidate.size();
  const size_t r = reference.size();
  if (c == 0) return 0.0;
  const size_t max_order = std::min<size_t>(kMaxBleuOrder, c);
  double log_sum = 0.0;
  for (size_t n = 1; n <= max_order; ++n) {
    const NgramCounts cand = CountNgrams(candidate, n);
    const NgramCounts ref = CountNgrams(reference, n);
    int matches = 0;
    for (const auto& [gram, count] : cand) {
      auto it = ref.find(gram);
      if (it != ref.end()) matches += std::min(count, it->second);
    }
    const double total = static_cast<double>(c - n + 1);
    const double precision = matches > 0 ? matches / total : kBleuFloor / total;
    log_sum += std::log(precision);
  }
  const double brevity = c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
  return brevity * std::exp(log_sum / static_cast<double>(max_order));
}

double Bleu(std::string_view candidate, std::string_view reference) {
  const auto cand = MetricTokens(candidate);
  const auto ref = MetricTokens(reference);
  return BleuTokens(cand, ref);
}

double RougeLTokens(std::span<const std::string> candidate, std::span<const std::string> reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  const size_t lcs = LcsLength(candidate, reference);
  if (lcs == 0) return 0.0;
  const double precision = static_cast<double>(lcs) / static_cast<double>(candidate.size());
  const double recall = static_cast<double>(lcs) / static_cast<double>(reference.size());
  return 2.0 * precision * recall / (precision + recall);
}

double RougeL(std::string_view candidate, std::string_view reference) {
  const auto cand = MetricTokens(candidate);
  const auto ref = MetricTokens(reference);
  return RougeLTokens(cand, ref);
}

double TokenOverlapF1(std::string_view a, std::string_view b) {
  const auto ta = MetricTokens(a);
  const auto tb = MetricTokens(b);
  if (ta.empty() || tb.empty()) return 0.0;
  std::unordered_map<std::string, int> counts;
  for (const auto& t : tb) ++counts[t];
  int overlap = 0;
  for (const auto& t : ta) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  const double p = static_cast<double>(overlap) / static_cast<double>(ta.size());
  const double r = static_cast<double>(overlap) / static_cast<double>(tb.size());
  return 2.0 * p * r / (p + r);
}

}  // namespace reportfix

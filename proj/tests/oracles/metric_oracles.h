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

// Reference implementations used only by tests. They share no code with the
// library: tokenization is regex based, n-grams are compared as joined
// strings, and LCS is computed by memoized recursion.

#ifndef REPORTFIX_TESTS_ORACLES_METRIC_ORACLES_H_
#define REPORTFIX_TESTS_ORACLES_METRIC_ORACLES_H_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <regex>
#include <string>
#include <vector>

namespace reportfix::oracle {

inline std::vector<std::string> Tokenize(const std::string& text) {
  std::string lowered;
  for (unsigned char c : text) lowered.push_back(c < 128 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
  static const std::regex token_re(R"([^\s!-/:-@\[-`{-~]+|[!-/:-@\[-`{-~])");
  std::vector<std::string> out;
  for (auto it = std::sregex_iterator(lowered.begin(), lowered.end(), token_re);
       it != std::sregex_iterator(); ++it) {
    out.push_back(it->str());
  }
  return out;
}

inline std::string JoinGram(const std::vector<std::string>& tokens, size_t start, size_t n) {
  std::string out;
  for (size_t i = start; i < start + n; ++i) {
    out += tokens[i];
    out.push_back('\x1f');
  }
  return out;
}

inline double Bleu(const std::string& candidate, const std::string& reference) {
  const auto cand = Tokenize(candidate);
  const auto ref = Tokenize(reference);
  if (cand.empty()) return 0.0;
  const size_t order = std::min<size_t>(4, cand.size());
  double product = 1.0;
  for (size_t n = 1; n <= order; ++n) {
    std::map<std::string, int> ref_counts;
    for (size_t i = 0; i + n <= ref.size(); ++i) ref_counts[JoinGram(ref, i, n)]++;
    int matched = 0;
    const int total = static_cast<int>(cand.size() - n + 1);
    for (size_t i = 0; i + n <= cand.size(); ++i) {
      auto it = ref_counts.find(JoinGram(cand, i, n));
      if (it != ref_counts.end() && it->second > 0) {
        --it->second;
        ++matched;
      }
    }
    product *= matched == 0 ? 0.1 / total : static_cast<double>(matched) / total;
  }
  const double geo = std::pow(product, 1.0 / static_cast<double>(order));
  const double c = static_cast<double>(cand.size());
  const double r = static_cast<double>(ref.size());
  return (c < r ? std::exp(1.0 - r / c) : 1.0) * geo;
}

inline size_t Lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::map<std::pair<size_t, size_t>, size_t> memo;
  std::function<size_t(size_t, size_t)> go = [&](size_t i, size_t j) -> size_t {
    if (i == a.size() || j == b.size()) return 0;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    size_t best = a[i] == b[j] ? 1 + go(i + 1, j + 1) : std::max(go(i + 1, j), go(i, j + 1));
    memo[key] = best;
    return best;
  };
  return go(0, 0);
}

inline double RougeL(const std::string& candidate, const std::string& reference) {
  const auto cand = Tokenize(candidate);
  const auto ref = Tokenize(reference);
  if (cand.empty() || ref.empty()) return 0.0;
  const double lcs = static_cast<double>(Lcs(cand, ref));
  if (lcs == 0) return 0.0;
  const double p = lcs / static_cast<double>(cand.size());
  const double r = lcs / static_cast<double>(ref.size());
  return (1 + 1.0) * p * r / (r + 1.0 * p);
}

}  // namespace reportfix::oracle

#endif  // REPORTFIX_TESTS_ORACLES_METRIC_ORACLES_H_

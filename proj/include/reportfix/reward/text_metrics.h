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

#ifndef REPORTFIX_REWARD_TEXT_METRICS_H_
#define REPORTFIX_REWARD_TEXT_METRICS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace reportfix {

// Metric tokenization: lowercase, split on whitespace, then every ASCII
// punctuation character becomes its own token.
std::vector<std::string> MetricTokens(std::string_view text);

inline constexpr int kMaxBleuOrder = 4;
inline constexpr double kBleuFloor = 0.1;

// Sentence BLEU over MetricTokens with n-gram order min(4, candidate length),
// uniform weights and brevity penalty exp(1 - r/c) for c < r. A zero modified
// precision at order n is floored to 0.1 / (number of candidate n-grams).
// Returns 0 for an empty candidate.
double Bleu(std::string_view candidate, std::string_view reference);
double BleuTokens(std::span<const std::string> candidate, std::span<const std::string> reference);

// ROUGE-L F1 (beta = 1) from the longest common subsequence of MetricTokens.
// Returns 0 when either side is empty.
double RougeL(std::string_view candidate, std::string_view reference);
double RougeLTokens(std::span<const std::string> candidate, std::span<const std::string> reference);

// Unigram overlap F1 (clipped counts) over MetricTokens; used to pair
// sentences.
double TokenOverlapF1(std::string_view a, std::string_view b);

}  // namespace reportfix

#endif  // REPORTFIX_REWARD_TEXT_METRICS_H_

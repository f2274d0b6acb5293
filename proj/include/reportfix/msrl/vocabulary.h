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

// Token vocabulary for the trainable policies. Text is split on whitespace,
// every ASCII punctuation character becomes its own token, and the reserved
// tags ("<think>", "</answer>", ...) are kept whole. Decoding joins tokens
// with single spaces.

#ifndef REPORTFIX_MSRL_VOCABULARY_H_
#define REPORTFIX_MSRL_VOCABULARY_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace reportfix {

inline constexpr std::string_view kUnkToken = "<unk>";
inline constexpr std::string_view kThinkOpen = "<think>";
inline constexpr std::string_view kThinkClose = "</think>";
inline constexpr std::string_view kAnswerOpen = "<answer>";
inline constexpr std::string_view kAnswerClose = "</answer>";
inline constexpr std::string_view kReportOpen = "<report>";
inline constexpr std::string_view kReportClose = "</report>";

class Vocabulary {
 public:
  // Reserved tokens come first, in the order above; `words` follow, with
  // duplicates dropped.
  explicit Vocabulary(const std::vector<std::string>& words);

  size_t size() const { return tokens_.size(); }
  int Id(std::string_view token) const;  // kUnk for unknown tokens
  const std::string& Token(int id) const { return tokens_.at(static_cast<size_t>(id)); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::vector<int> Encode(std::string_view text) const;
  std::string Decode(const std::vector<int>& ids) const;

  static constexpr int kUnk = 0;
  static constexpr int kThinkOpenId = 1;
  static constexpr int kThinkCloseId = 2;
  static constexpr int kAnswerOpenId = 3;
  static constexpr int kAnswerCloseId = 4;
  static constexpr int kReportOpenId = 5;
  static constexpr int kReportCloseId = 6;
  static constexpr int kNumReserved = 7;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

// Splits text into surface tokens without mapping to ids.
std::vector<std::string> SplitPolicyTokens(std::string_view text);

// Reserved tokens plus the most frequent surface tokens of `texts`, up to
// `max_size` entries in total. Ties are broken alphabetically.
Vocabulary BuildVocabulary(const std::vector<std::string>& texts, size_t max_size);

}  // namespace reportfix

#endif  // REPORTFIX_MSRL_VOCABULARY_H_

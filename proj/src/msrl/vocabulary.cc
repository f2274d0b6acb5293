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

#include "reportfix/msrl/vocabulary.h"

#include <algorithm>
#include <array>
#include <map>

#include "reportfix/common/strings.h"

namespace reportfix {
namespace {

constexpr std::array<std::string_view, Vocabulary::kNumReserved> kReserved = {
    kUnkToken, kThinkOpen, kThinkClose, kAnswerOpen, kAnswerClose, kReportOpen, kReportClose};

}  // namespace

std::vector<std::string> SplitPolicyTokens(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (IsAsciiSpace(c)) {
      ++i;
      continue;
    }
    if (c == '<') {
      bool matched = false;
      for (std::string_view tag : kReserved) {
        if (tag != kUnkToken && text.substr(i, tag.size()) == tag) {
          out.emplace_back(tag);
          i += tag.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    if (IsAsciiPunct(c)) {
      out.emplace_back(1, c);
      ++i;
      continue;
    }
    size_t j = i;
    while (j < text.size() && !IsAsciiSpace(text[j]) && !IsAsciiPunct(text[j])) ++j;
    out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

Vocabulary::Vocabulary(const std::vector<std::string>& words) {
  auto add = [&](std::string_view t) {
    if (ids_.count(std::string(t)) > 0) return;
    ids_.emplace(std::string(t), static_cast<int>(tokens_.size()));
    tokens_.emplace_back(t);
  };
  for (std::string_view t : kReserved) add(t);
  for (const std::string& w : words) add(w);
}

int Vocabulary::Id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

std::vector<int> Vocabulary::Encode(std::string_view text) const {
  std::vector<int> ids;
  for (const std::string& t : SplitPolicyTokens(text)) ids.push_back(Id(t));
  return ids;
}

std::string Vocabulary::Decode(const std::vector<int>& ids) const {
  std::string out;
  for (int id : ids) {
    if (!out.empty()) out += ' ';
    out += Token(id);
  }
  return out;
}

Vocabulary BuildVocabulary(const std::vector<std::string>& texts, size_t max_size) {
  std::map<std::string, size_t> counts;
  for (const std::string& text : texts) {
    for (std::string& t : SplitPolicyTokens(text)) ++counts[std::move(t)];
  }
  std::vector<std::pair<std::string, size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> words;
  for (const auto& [token, count] : ranked) {
    if (words.size() + Vocabulary::kNumReserved >= max_size) break;
    words.push_back(token);
  }
  return Vocabulary(words);
}

}  // namespace reportfix

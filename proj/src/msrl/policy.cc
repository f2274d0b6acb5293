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

#include "reportfix/msrl/policy.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "reportfix/common/random.h"

namespace reportfix {
namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr uint64_t kFnvPrime = 1099511628211ULL;
constexpr size_t kMaxAnswerPosition = 31;
// How far ahead the copy alignment may jump to resynchronize.
constexpr size_t kAlignWindow = 8;
constexpr char kSnapshotMagic[8] = {'R', 'F', 'X', 'P', 'O', 'L', '0', '1'};

uint64_t Fnv(std::initializer_list<uint64_t> parts) {
  uint64_t h = kFnvOffset;
  for (uint64_t p : parts) {
    for (int b = 0; b < 8; ++b) {
      h ^= (p >> (8 * b)) & 0xff;
      h *= kFnvPrime;
    }
  }
  return h;
}

bool Masked(int id) {
  return id == Vocabulary::kUnk || id == Vocabulary::kReportOpenId ||
         id == Vocabulary::kReportCloseId;
}

}  // namespace

// Per-query feature extraction and scoring for LogLinearPolicy.
class LogLinearSession {
 public:
  struct State {
    int prev1;
    int prev2;
    bool active = false;  // inside an answer block
    long pointer = -1;    // last aligned index in source_
    size_t answer_pos = 0;
  };

  LogLinearSession(const LogLinearPolicy& policy, const std::string& query)
      : v_(policy.vocab_.size()), h_(policy.config_.hash_buckets) {
    const std::vector<int> tokens = policy.vocab_.Encode(query);
    uint64_t key = kFnvOffset;
    for (size_t i = tokens.size() >= 3 ? tokens.size() - 3 : 0; i < tokens.size(); ++i) {
      key = Fnv({key, static_cast<uint64_t>(tokens[i])});
    }
    step_key_ = key;
    bag_ = tokens;
    std::sort(bag_.begin(), bag_.end());
    bag_.erase(std::unique(bag_.begin(), bag_.end()), bag_.end());
    const auto open = std::find(tokens.begin(), tokens.end(), Vocabulary::kReportOpenId);
    if (open != tokens.end()) {
      const auto close = std::find(open + 1, tokens.end(), Vocabulary::kReportCloseId);
      source_.assign(open + 1, close);
    }
    copy_base_ = h_ * v_ + (step_key_ % LogLinearPolicy::kCopySlots) * LogLinearPolicy::kCopyKinds;
  }

  State Initial() const {
    State s;
    s.prev1 = static_cast<int>(v_);
    s.prev2 = static_cast<int>(v_);
    return s;
  }

  void Advance(State& s, int y) const {
    if (y == Vocabulary::kAnswerOpenId) {
      s.active = true;
      s.pointer = -1;
      s.answer_pos = 0;
    } else if (s.active) {
      const size_t next = static_cast<size_t>(s.pointer + 1);
      if (next < source_.size() && source_[next] == y) {
        ++s.pointer;
      } else {
        for (size_t j = next + 1; j < std::min(source_.size(), next + 1 + kAlignWindow); ++j) {
          if (source_[j] == y) {
            s.pointer = static_cast<long>(j);
            break;
          }
        }
      }
      ++s.answer_pos;
    }
    s.prev2 = s.prev1;
    s.prev1 = y;
  }

  // Rows of the weight table active in state `s`.
  const std::vector<size_t>& Rows(const State& s) {
    rows_.clear();
    const uint64_t p1 = static_cast<uint64_t>(s.prev1);
    const uint64_t p2 = static_cast<uint64_t>(s.prev2);
    rows_.push_back(Fnv({0, step_key_}) % h_);
    rows_.push_back(Fnv({1, step_key_, p1}) % h_);
    rows_.push_back(Fnv({2, step_key_, p1, p2}) % h_);
    if (s.active) {
      rows_.push_back(Fnv({4, step_key_, std::min(s.answer_pos, kMaxAnswerPosition)}) % h_);
    }
    const std::vector<size_t>& bag = BagRows(s.prev1);
    rows_.insert(rows_.end(), bag.begin(), bag.end());
    return rows_;
  }

  // Copy feature values for candidate v: {next-token, end-of-source}.
  int CopyTarget(const State& s) const {
    if (!s.active) return -1;
    const size_t next = static_cast<size_t>(s.pointer + 1);
    return next < source_.size() ? source_[next] : -1;
  }
  bool CopyEnd(const State& s) const {
    return s.active && !source_.empty() && static_cast<size_t>(s.pointer + 1) >= source_.size();
  }

  // Fills log-probabilities over the vocabulary.
  void LogProbs(const State& s, std::span<const double> params, std::vector<double>& out) {
    out.assign(v_, 0.0);
    for (size_t r : Rows(s)) {
      const double* w = params.data() + r * v_;
      for (size_t v = 0; v < v_; ++v) out[v] += w[v];
    }
    if (const int t = CopyTarget(s); t >= 0) out[static_cast<size_t>(t)] += params[copy_base_];
    if (CopyEnd(s)) out[Vocabulary::kAnswerCloseId] += params[copy_base_ + 1];
    double max_logit = -std::numeric_limits<double>::infinity();
    for (size_t v = 0; v < v_; ++v) {
      if (Masked(static_cast<int>(v))) continue;
      max_logit = std::max(max_logit, out[v]);
    }
    double sum = 0;
    for (size_t v = 0; v < v_; ++v) {
      if (!Masked(static_cast<int>(v))) sum += std::exp(out[v] - max_logit);
    }
    const double log_z = max_logit + std::log(sum);
    for (size_t v = 0; v < v_; ++v) {
      out[v] = Masked(static_cast<int>(v)) ? -std::numeric_limits<double>::infinity()
                                           : out[v] - log_z;
    }
  }

  void AddGradient(const State& s, int y, double coeff, const std::vector<double>& logp,
                   std::span<double> grad) {
    probs_.resize(v_);
    for (size_t v = 0; v < v_; ++v) probs_[v] = std::exp(logp[v]);
    for (size_t r : Rows(s)) {
      double* g = grad.data() + r * v_;
      for (size_t v = 0; v < v_; ++v) g[v] -= coeff * probs_[v];
      g[y] += coeff;
    }
    if (const int t = CopyTarget(s); t >= 0) {
      grad[copy_base_] += coeff * ((y == t ? 1.0 : 0.0) - probs_[static_cast<size_t>(t)]);
    }
    if (CopyEnd(s)) {
      grad[copy_base_ + 1] += coeff * ((y == Vocabulary::kAnswerCloseId ? 1.0 : 0.0) -
                                       probs_[Vocabulary::kAnswerCloseId]);
    }
  }

 private:
  const std::vector<size_t>& BagRows(int prev1) {
    auto it = bag_rows_.find(prev1);
    if (it != bag_rows_.end()) return it->second;
    std::vector<size_t> rows;
    rows.reserve(bag_.size());
    for (int b : bag_) {
      rows.push_back(Fnv({3, step_key_, static_cast<uint64_t>(prev1), static_cast<uint64_t>(b)}) %
                     h_);
    }
    return bag_rows_.emplace(prev1, std::move(rows)).first->second;
  }

  size_t v_;
  size_t h_;
  uint64_t step_key_ = 0;
  size_t copy_base_ = 0;
  std::vector<int> bag_;
  std::vector<int> source_;
  std::unordered_map<int, std::vector<size_t>> bag_rows_;
  std::vector<size_t> rows_;
  std::vector<double> probs_;
};

LogLinearPolicy::LogLinearPolicy(Vocabulary vocab, LogLinearConfig config)
    : vocab_(std::move(vocab)), config_(config) {
  if (config_.hash_buckets == 0) throw std::invalid_argument("hash_buckets must be positive");
  params_.assign(config_.hash_buckets * vocab_.size() + kCopySlots * kCopyKinds, 0.0);
  if (config_.init_scale > 0) {
    Rng rng(config_.init_seed);
    for (double& p : params_) p = (2 * rng.Uniform() - 1) * config_.init_scale;
  }
}

std::vector<StepOutput> LogLinearPolicy::Sample(const std::string& query, size_t n, uint64_t seed,
                                                const SampleOptions& options) const {
  LogLinearSession session(*this, query);
  std::vector<StepOutput> outputs(n);
  std::vector<double> logp;
  std::vector<double> weights(vocab_.size());
  for (size_t i = 0; i < n; ++i) {
    Rng rng(seed, i);
    StepOutput& out = outputs[i];
    auto state = session.Initial();
    bool stopped = false;
    while (out.tokens.size() < options.max_new_tokens) {
      session.LogProbs(state, params_, logp);
      int y = 0;
      if (options.temperature <= 0) {
        y = static_cast<int>(std::max_element(logp.begin(), logp.end()) - logp.begin());
      } else {
        for (size_t v = 0; v < logp.size(); ++v) {
          weights[v] = std::isinf(logp[v]) ? 0.0 : std::exp(logp[v] / options.temperature);
        }
        y = static_cast<int>(rng.Categorical(weights));
      }
      out.tokens.push_back(y);
      out.logprobs.push_back(logp[static_cast<size_t>(y)]);
      session.Advance(state, y);
      if (y == Vocabulary::kAnswerCloseId) {
        stopped = true;
        break;
      }
    }
    out.truncated = !stopped;
    out.text = vocab_.Decode(out.tokens);
  }
  return outputs;
}

std::vector<double> LogLinearPolicy::Score(const std::string& query,
                                           const std::vector<int>& tokens) const {
  LogLinearSession session(*this, query);
  std::vector<double> out;
  out.reserve(tokens.size());
  std::vector<double> logp;
  auto state = session.Initial();
  for (int y : tokens) {
    session.LogProbs(state, params_, logp);
    out.push_back(logp.at(static_cast<size_t>(y)));
    session.Advance(state, y);
  }
  return out;
}

void LogLinearPolicy::AccumulateGradient(const std::string& query, const std::vector<int>& tokens,
                                         std::span<const double> coeffs,
                                         std::span<double> grad) const {
  if (coeffs.size() != tokens.size()) throw std::invalid_argument("one coefficient per token");
  if (grad.size() != params_.size()) throw std::invalid_argument("gradient size mismatch");
  LogLinearSession session(*this, query);
  std::vector<double> logp;
  auto state = session.Initial();
  for (size_t t = 0; t < tokens.size(); ++t) {
    if (coeffs[t] != 0.0) {
      session.LogProbs(state, params_, logp);
      session.AddGradient(state, tokens[t], coeffs[t], logp, grad);
    }
    session.Advance(state, tokens[t]);
  }
}

std::unique_ptr<Policy> LogLinearPolicy::Clone() const {
  return std::make_unique<LogLinearPolicy>(*this);
}

namespace {

template <typename T>
void WritePod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ReadPod(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("truncated policy snapshot");
  return v;
}

}  // namespace

void SavePolicy(const LogLinearPolicy& policy, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(kSnapshotMagic, sizeof(kSnapshotMagic));
  const auto& tokens = policy.vocab().tokens();
  WritePod<uint64_t>(out, tokens.size() - Vocabulary::kNumReserved);
  for (size_t i = Vocabulary::kNumReserved; i < tokens.size(); ++i) {
    WritePod<uint64_t>(out, tokens[i].size());
    out.write(tokens[i].data(), static_cast<std::streamsize>(tokens[i].size()));
  }
  WritePod<uint64_t>(out, policy.config().hash_buckets);
  WritePod<double>(out, policy.config().init_scale);
  WritePod<uint64_t>(out, policy.config().init_seed);
  const auto params = policy.parameters();
  WritePod<uint64_t>(out, params.size());
  out.write(reinterpret_cast<const char*>(params.data()),
            static_cast<std::streamsize>(params.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

LogLinearPolicy LoadPolicy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[sizeof(kSnapshotMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kSnapshotMagic, sizeof(magic)) != 0) {
    throw std::runtime_error(path.string() + " is not a policy snapshot");
  }
  const auto n_words = ReadPod<uint64_t>(in);
  std::vector<std::string> words;
  for (uint64_t i = 0; i < n_words; ++i) {
    std::string w(ReadPod<uint64_t>(in), '\0');
    in.read(w.data(), static_cast<std::streamsize>(w.size()));
    words.push_back(std::move(w));
  }
  LogLinearConfig config;
  config.hash_buckets = ReadPod<uint64_t>(in);
  config.init_scale = ReadPod<double>(in);
  config.init_seed = ReadPod<uint64_t>(in);
  LogLinearPolicy policy(Vocabulary(words), config);
  const auto n_params = ReadPod<uint64_t>(in);
  auto params = policy.parameters();
  if (n_params != params.size()) throw std::runtime_error("parameter count mismatch in snapshot");
  in.read(reinterpret_cast<char*>(params.data()),
          static_cast<std::streamsize>(params.size() * sizeof(double)));
  if (!in) throw std::runtime_error("truncated policy snapshot");
  return policy;
}

}  // namespace reportfix

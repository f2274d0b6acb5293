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

// External metric scorers. A plugin is a program that reads one request per
// line, {"id", "candidate", "reference"}, from stdin and writes one response
// per line, {"id", "score"}, to stdout, in request order.

#ifndef REPORTFIX_EVAL_SCORER_H_
#define REPORTFIX_EVAL_SCORER_H_

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace reportfix {

struct ScorePair {
  std::string id;
  std::string candidate;
  std::string reference;
};

// Transport or protocol failure; the metric is then reported as unavailable.
class ScorerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual const std::string& name() const = 0;
  // One score in [0, 1] per pair, same order. Throws ScorerError.
  virtual std::vector<double> ScoreBatch(const std::vector<ScorePair>& pairs) = 0;
};

struct ScorerSpec {
  std::string name;
  std::vector<std::string> command;  // argv; command[0] is looked up in PATH
  double timeout_s = 600;
};

// Runs the plugin once per batch.
class SubprocessScorer : public Scorer {
 public:
  explicit SubprocessScorer(ScorerSpec spec);
  const std::string& name() const override { return spec_.name; }
  std::vector<double> ScoreBatch(const std::vector<ScorePair>& pairs) override;

 private:
  ScorerSpec spec_;
};

}  // namespace reportfix

#endif  // REPORTFIX_EVAL_SCORER_H_

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

// Model predictions as consumed by the evaluation code.

#ifndef REPORTFIX_EVAL_PREDICTION_H_
#define REPORTFIX_EVAL_PREDICTION_H_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "reportfix/report/error_type.h"
#include "reportfix/report/sample.h"

namespace reportfix {

struct Prediction {
  std::string sample_id;
  std::string raw_output;
  // Empty when nothing parsable was found; never filled with guesses.
  std::vector<ErrorType> predicted_types;
  // Empty when the output had no corrected report.
  std::string corrected_text;
  std::optional<std::string> error_note;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

class EvalInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::ordered_json PredictionToJson(const Prediction& p);
// Throws EvalInputError naming the bad field.
Prediction PredictionFromJson(const nlohmann::json& j);

// One JSON object per line; blank lines are skipped.
std::vector<Prediction> ReadPredictions(const std::filesystem::path& path);
void WritePredictions(const std::filesystem::path& path, const std::vector<Prediction>& preds);

// A perfect model: ground-truth types and the original report.
std::vector<Prediction> IdentityPredictions(const std::vector<CorruptedSample>& samples);

// Pairs every ground-truth sample with its prediction by sample_id. Throws
// EvalInputError when ids are duplicated, missing or unknown.
std::vector<const Prediction*> AlignPredictions(const std::vector<Prediction>& preds,
                                                const std::vector<CorruptedSample>& truth);

}  // namespace reportfix

#endif  // REPORTFIX_EVAL_PREDICTION_H_

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

#include "reportfix/eval/prediction.h"

#include <fstream>
#include <unordered_map>

namespace reportfix {

nlohmann::ordered_json PredictionToJson(const Prediction& p) {
  nlohmann::ordered_json j;
  j["sample_id"] = p.sample_id;
  j["raw_output"] = p.raw_output;
  j["predicted_types"] = nlohmann::ordered_json::array();
  for (ErrorType t : p.predicted_types) j["predicted_types"].push_back(std::string(ToString(t)));
  j["corrected_text"] = p.corrected_text;
  if (p.error_note) j["error_note"] = *p.error_note;
  return j;
}

Prediction PredictionFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw EvalInputError("prediction is not an object");
  auto str = [&](const char* key, bool required) -> std::optional<std::string> {
    if (!j.contains(key)) {
      if (required) throw EvalInputError(std::string("missing field ") + key);
      return std::nullopt;
    }
    if (!j.at(key).is_string()) throw EvalInputError(std::string(key) + " must be a string");
    return j.at(key).get<std::string>();
  };
  Prediction p;
  p.sample_id = *str("sample_id", true);
  p.raw_output = str("raw_output", false).value_or("");
  p.corrected_text = str("corrected_text", false).value_or("");
  p.error_note = str("error_note", false);
  if (j.contains("predicted_types")) {
    const auto& types = j.at("predicted_types");
    if (!types.is_array()) throw EvalInputError("predicted_types must be an array");
    for (size_t i = 0; i < types.size(); ++i) {
      const auto t = types[i].is_string() ? ParseErrorType(types[i].get<std::string>())
                                          : std::nullopt;
      if (!t) throw EvalInputError("predicted_types[" + std::to_string(i) + "] is not a label");
      p.predicted_types.push_back(*t);
    }
  }
  return p;
}

std::vector<Prediction> ReadPredictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw EvalInputError("cannot open " + path.string());
  std::vector<Prediction> out;
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(PredictionFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw EvalInputError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    } catch (const EvalInputError& e) {
      throw EvalInputError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

void WritePredictions(const std::filesystem::path& path, const std::vector<Prediction>& preds) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const Prediction& p : preds) out << PredictionToJson(p).dump() << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<Prediction> IdentityPredictions(const std::vector<CorruptedSample>& samples) {
  std::vector<Prediction> out;
  out.reserve(samples.size());
  for (const CorruptedSample& s : samples) {
    Prediction p;
    p.sample_id = s.sample_id;
    for (const ErrorRecord& e : s.errors) p.predicted_types.push_back(e.error_type);
    p.corrected_text = s.original_text;
    p.raw_output = s.original_text;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<const Prediction*> AlignPredictions(const std::vector<Prediction>& preds,
                                                const std::vector<CorruptedSample>& truth) {
  std::unordered_map<std::string, const Prediction*> by_id;
  for (const Prediction& p : preds) {
    if (!by_id.emplace(p.sample_id, &p).second) {
      throw EvalInputError("duplicate prediction for " + p.sample_id);
    }
  }
  std::vector<const Prediction*> out;
  out.reserve(truth.size());
  for (const CorruptedSample& s : truth) {
    auto it = by_id.find(s.sample_id);
    if (it == by_id.end()) throw EvalInputError("no prediction for " + s.sample_id);
    out.push_back(it->second);
    by_id.erase(it);
  }
  if (!by_id.empty()) {
    throw EvalInputError("prediction for unknown sample " + by_id.begin()->first);
  }
  return out;
}

}  // namespace reportfix

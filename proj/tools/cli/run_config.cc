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

#include "tools/cli/run_config.h"

#include <algorithm>
#include <fstream>
#include <set>

namespace reportfix::cli {
namespace {

using nlohmann::json;

std::string JoinProblems(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration:";
  for (const auto& p : problems) out += "\n  " + p;
  return out;
}

// Reads typed values out of one JSON object and remembers which keys were
// consumed, so leftovers can be reported as unknown.
class Section {
 public:
  Section(const json* j, std::string path, std::vector<std::string>& problems)
      : j_(j), path_(std::move(path)), problems_(problems) {
    if (j_ && !j_->is_object()) {
      problems_.push_back(Name("") + ": must be an object");
      j_ = nullptr;
    }
  }

  // Copies would report unknown keys twice.
  Section(const Section&) = delete;
  Section& operator=(const Section&) = delete;

  ~Section() {
    if (!j_) return;
    for (const auto& [key, value] : j_->items()) {
      if (!seen_.count(key)) problems_.push_back(Name(key) + ": unknown key");
    }
  }

  Section Child(const std::string& key) {
    seen_.insert(key);
    const json* c = j_ && j_->contains(key) ? &j_->at(key) : nullptr;
    return Section(c, Name(key), problems_);
  }

  const json* Raw(const std::string& key) {
    seen_.insert(key);
    return j_ && j_->contains(key) ? &j_->at(key) : nullptr;
  }

  bool Get(const std::string& key, std::string& out) {
    const json* v = Raw(key);
    if (!v) return false;
    if (!v->is_string()) return Bad(key, "a string");
    out = v->get<std::string>();
    return true;
  }
  bool Get(const std::string& key, std::optional<std::string>& out) {
    std::string s;
    if (!Get(key, s)) return false;
    out = s;
    return true;
  }
  bool Get(const std::string& key, bool& out) {
    const json* v = Raw(key);
    if (!v) return false;
    if (!v->is_boolean()) return Bad(key, "a boolean");
    out = v->get<bool>();
    return true;
  }
  bool Get(const std::string& key, double& out) {
    const json* v = Raw(key);
    if (!v) return false;
    if (!v->is_number()) return Bad(key, "a number");
    out = v->get<double>();
    return true;
  }
  template <typename Int>
    requires std::is_integral_v<Int>
  bool Get(const std::string& key, Int& out) {
    const json* v = Raw(key);
    if (!v) return false;
    if (!v->is_number_integer()) return Bad(key, "an integer");
    if (std::is_unsigned_v<Int> && v->is_number_integer() && !v->is_number_unsigned() &&
        v->get<long long>() < 0) {
      return Bad(key, "a non-negative integer");
    }
    out = v->get<Int>();
    return true;
  }

  std::string Name(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "<root>" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  bool Bad(const std::string& key, const std::string& expected) {
    problems_.push_back(Name(key) + ": must be " + expected);
    return false;
  }

  std::vector<std::string>& problems() { return problems_; }
  bool present() const { return j_ != nullptr; }

 private:
  const json* j_;
  std::string path_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

void ReadClient(Section s, GenerationClientConfig& c) {
  s.Get("endpoint_url", c.endpoint_url);
  s.Get("model_name", c.model_name);
  s.Get("request_timeout_s", c.request_timeout_s);
  s.Get("max_retries", c.max_retries);
  s.Get("temperature", c.temperature);
  s.Get("api_key_env", c.api_key_env);
}

template <size_t N>
void ReadWeights(Section& s, const std::string& key, std::array<double, N>& out) {
  const json* v = s.Raw(key);
  if (!v) return;
  if (!v->is_array() || v->size() != N) {
    s.Bad(key, "an array of " + std::to_string(N) + " numbers");
    return;
  }
  for (size_t i = 0; i < N; ++i) {
    if (!(*v)[i].is_number()) {
      s.Bad(key, "an array of " + std::to_string(N) + " numbers");
      return;
    }
    out[i] = (*v)[i].get<double>();
  }
}

template <typename F>
void Check(std::vector<std::string>& problems, const std::string& section, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    problems.push_back(section + ": " + e.what());
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(JoinProblems(problems)), problems_(std::move(problems)) {}

RunConfig ParseRunConfig(const json& j) {
  std::vector<std::string> problems;
  RunConfig c;
  {
    Section root(&j, "", problems);
    root.Get("seed", c.seed);
    root.Get("log_level", c.log_level);
    root.Get("out_dir", c.out_dir);
    {
      Section s = root.Child("synth");
      s.Get("mode", c.synth.mode);
      s.Get("input", c.synth.input);
      s.Get("count", c.synth.count);
      ReadWeights(s, "type_weights", c.synth.injection.type_weights);
      s.Get("multi_error_rate", c.synth.injection.multi_error_rate);
      ReadWeights(s, "multi_count_weights", c.synth.injection.multi_count_weights);
      s.Get("max_replans", c.synth.max_replans);
      s.Get("concurrency", c.synth.concurrency);
      ReadClient(s.Child("client"), c.synth.client);
    }
    {
      Section s = root.Child("validate");
      s.Get("input", c.validate.input);
      s.Get("store", c.validate.store);
    }
    {
      Section s = root.Child("train");
      TrainSection& t = c.train;
      s.Get("task", t.task);
      s.Get("dataset_path", t.dataset_path);
      std::string mode;
      if (s.Get("mode", mode)) {
        if (auto m = ParseTrainMode(mode)) {
          t.mode = *m;
        } else {
          s.Bad("mode", "\"msrl\" or \"single_step_rl\"");
        }
      }
      s.Get("group_size", t.grpo.group_size);
      s.Get("epsilon", t.grpo.epsilon);
      s.Get("beta", t.grpo.beta);
      s.Get("lr", t.grpo.learning_rate);
      s.Get("steps", t.grpo.steps);
      s.Get("max_new_tokens", t.grpo.max_new_tokens);
      s.Get("temperature", t.grpo.temperature);
      s.Get("std_guard", t.grpo.std_guard);
      t.seed_set = s.Get("seed", t.grpo.seed);
      s.Get("batch_size", t.batch_size);
      s.Get("toy_size", t.toy_size);
      s.Get("eval_size", t.eval_size);
      s.Get("prior_steps", t.prior_steps);
      s.Get("hash_buckets", t.hash_buckets);
      s.Get("teacher_forced_context", t.teacher_forced_context);
      s.Get("workers", t.workers);
      s.Get("image_ref", t.image_ref);
      s.Get("init_policy", t.init_policy);
    }
    {
      Section s = root.Child("eval");
      s.Get("dataset", c.eval.dataset);
      s.Get("predictions", c.eval.predictions);
      s.Get("identity", c.eval.identity);
      s.Get("workers", c.eval.workers);
      if (const json* list = s.Raw("scorers")) {
        if (!list->is_array()) {
          s.Bad("scorers", "an array");
        } else {
          for (size_t i = 0; i < list->size(); ++i) {
            Section p(&(*list)[i], s.Name("scorers") + "[" + std::to_string(i) + "]", problems);
            ScorerSpec spec;
            if (!p.Get("name", spec.name)) p.problems().push_back(p.Name("name") + ": required");
            p.Get("timeout_s", spec.timeout_s);
            const json* cmd = p.Raw("command");
            if (!cmd || !cmd->is_array() || cmd->empty() ||
                !std::all_of(cmd->begin(), cmd->end(), [](const json& a) { return a.is_string(); })) {
              p.Bad("command", "a non-empty array of strings");
            } else {
              for (const auto& a : *cmd) spec.command.push_back(a.get<std::string>());
            }
            c.eval.scorers.push_back(std::move(spec));
          }
        }
      }
    }
    {
      Section s = root.Child("bench");
      s.Get("dataset", c.bench.dataset);
      ReadClient(s.Child("client"), c.bench.client);
      s.Get("concurrency_limit", c.bench.bench.concurrency_limit);
      s.Get("image_ref_template", c.bench.bench.image_ref_template);
    }
    {
      Section s = root.Child("serve");
      s.Get("host", c.serve.host);
      s.Get("port", c.serve.port);
      s.Get("store", c.serve.store);
    }
  }
  if (!problems.empty()) throw ConfigError(problems);
  c.bench.bench.model_name = c.bench.client.model_name;
  c.bench.bench.temperature = c.bench.client.temperature;
  c.bench.bench.max_retries = c.bench.client.max_retries;
  if (!c.train.seed_set) c.train.grpo.seed = c.seed;
  c.synth.injection.seed = c.seed;
  return c;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path.string() + ": cannot open"});
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
  return ParseRunConfig(j);
}

void CheckRunConfig(const RunConfig& c) {
  std::vector<std::string> problems;
  static const std::set<std::string> kLevels = {"trace", "debug", "info", "warn", "error", "off"};
  if (!kLevels.count(c.log_level)) problems.push_back("log_level: unknown level " + c.log_level);
  if (c.synth.mode != "rules" && c.synth.mode != "llm") {
    problems.push_back("synth.mode: must be \"rules\" or \"llm\"");
  }
  Check(problems, "synth", [&] { ValidateInjectionConfig(c.synth.injection); });
  Check(problems, "synth.client", [&] { ValidateGenerationClientConfig(c.synth.client); });
  if (c.synth.concurrency == 0) problems.push_back("synth.concurrency: must be >= 1");
  if (c.synth.max_replans < 1) problems.push_back("synth.max_replans: must be >= 1");
  if (c.train.task != "toy" && c.train.task != "dataset") {
    problems.push_back("train.task: must be \"toy\" or \"dataset\"");
  }
  if (c.train.task == "dataset" && !c.train.dataset_path) {
    problems.push_back("train.dataset_path: required when train.task is \"dataset\"");
  }
  Check(problems, "train", [&] { ValidateGrpoConfig(c.train.grpo); });
  if (c.train.batch_size == 0) problems.push_back("train.batch_size: must be >= 1");
  if (c.train.hash_buckets == 0) problems.push_back("train.hash_buckets: must be >= 1");
  Check(problems, "bench.client", [&] { ValidateGenerationClientConfig(c.bench.client); });
  Check(problems, "bench", [&] { ValidateBenchmarkConfig(c.bench.bench); });
  if (c.eval.workers == 0) problems.push_back("eval.workers: must be >= 1");
  if (c.serve.port < 0 || c.serve.port > 65535) problems.push_back("serve.port: out of range");
  if (!problems.empty()) throw ConfigError(problems);
}

}  // namespace reportfix::cli

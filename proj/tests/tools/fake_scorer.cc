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

// Test double for the scorer plugin protocol. The first argument picks the
// behaviour: exact (1 if candidate == reference, else 0.25), crash,
// wrong-id, short, out-of-range, garbage, slow.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>

#include "json.hpp"

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "exact";
  if (mode == "slow") std::this_thread::sleep_for(std::chrono::seconds(5));
  std::string line;
  int n = 0;
  std::string pending;
  while (std::getline(std::cin, line)) {
    const auto req = nlohmann::json::parse(line);
    ++n;
    if (mode == "crash" && n == 2) return 3;
    nlohmann::json resp;
    resp["id"] = mode == "wrong-id" ? nlohmann::json("nope") : req["id"];
    resp["score"] = req["candidate"] == req["reference"] ? 1.0 : 0.25;
    if (mode == "out-of-range") resp["score"] = 1.5;
    if (mode == "garbage") {
      std::cout << "not json\n";
      continue;
    }
    if (mode == "short") {
      // Hold back the final response.
      if (!pending.empty()) std::cout << pending << "\n";
      pending = resp.dump();
      continue;
    }
    std::cout << resp.dump() << "\n";
  }
  return 0;
}

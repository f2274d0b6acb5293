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

#ifndef REPORTFIX_COMMON_PARALLEL_H_
#define REPORTFIX_COMMON_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace reportfix {

// Runs fn(i) for i in [0, n) on at most `max_in_flight` worker threads and
// returns the results in index order. The first exception thrown by any call
// is rethrown after all workers have joined.
template <typename Result>
std::vector<Result> OrderedParallelMap(size_t n, size_t max_in_flight,
                                       const std::function<Result(size_t)>& fn) {
  std::vector<Result> results(n);
  if (n == 0) return results;
  const size_t workers = std::clamp<size_t>(max_in_flight, 1, n);
  if (workers == 1) {
    for (size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }

  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto work = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace reportfix

#endif  // REPORTFIX_COMMON_PARALLEL_H_

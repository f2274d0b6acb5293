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

// HTTP front end for ReviewStore:
//   GET  /api/queue?status=<status|all>&cursor=<id>&limit=<n>
//   GET  /api/items/{id}
//   POST /api/items/{id}/verdict   {action, edited_sample?, reviewer}
//   GET  /api/stats
// Errors are JSON {"error": ...}: 400 bad request, 404 unknown item, 409
// verdict on a reviewed item, 422 edit failing C1-C4 (with "findings").

#ifndef REPORTFIX_QC_REVIEW_SERVER_H_
#define REPORTFIX_QC_REVIEW_SERVER_H_

#include <memory>
#include <string>

#include "reportfix/qc/review_store.h"

namespace reportfix {

inline constexpr int kDefaultReviewPort = 8876;
inline constexpr size_t kDefaultPageSize = 50;
inline constexpr size_t kMaxPageSize = 500;

class ReviewServer {
 public:
  explicit ReviewServer(ReviewStore& store);
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  // Binds to host:port (port 0 picks a free one) and returns the bound port,
  // or -1 on failure.
  int Bind(const std::string& host, int port);
  // Serves until Stop(); call after a successful Bind.
  bool Serve();
  void Stop();
  bool IsRunning() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace reportfix

#endif  // REPORTFIX_QC_REVIEW_SERVER_H_

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

// Review queue persisted as an append-only event log. The materialized state
// is always the fold of queue.jsonl (enqueued items) and events.jsonl
// (verdicts) found in the store directory.

#ifndef REPORTFIX_QC_REVIEW_STORE_H_
#define REPORTFIX_QC_REVIEW_STORE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "reportfix/qc/validate.h"
#include "reportfix/report/sample.h"

namespace reportfix {

enum class ReviewStatus { kFlagged, kAccepted, kRejected, kEdited };
std::string_view ToString(ReviewStatus status);
std::optional<ReviewStatus> ParseReviewStatus(std::string_view text);

enum class VerdictAction { kAccept, kReject, kEdit };
std::string_view ToString(VerdictAction action);
std::optional<VerdictAction> ParseVerdictAction(std::string_view text);

struct ReviewEvent {
  uint64_t seq = 0;
  std::string item_id;
  VerdictAction action = VerdictAction::kAccept;
  std::string reviewer;
  int64_t timestamp = 0;  // UTC seconds
  std::optional<CorruptedSample> edited_sample;
};

struct ReviewItem {
  std::string item_id;
  CorruptedSample sample;
  std::vector<QcFinding> findings;
  ReviewStatus status = ReviewStatus::kFlagged;
  std::optional<CorruptedSample> edited_sample;
  std::string reviewer;
  int64_t updated_at = 0;
};

struct ReviewStats {
  std::map<std::string, size_t> by_status;
  std::map<std::string, size_t> by_check_code;
  size_t total = 0;
};

struct ReviewState {
  std::map<std::string, ReviewItem> items;
  uint64_t last_seq = 0;

  // Throws std::logic_error when the event does not apply.
  void Apply(const ReviewEvent& event);
  ReviewStats Stats() const;
  // Deterministic JSON of the full state.
  std::string SnapshotJson() const;
};

struct VerdictRequest {
  VerdictAction action = VerdictAction::kAccept;
  std::optional<CorruptedSample> edited_sample;
  std::string reviewer;
};

class ReviewError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ItemNotFoundError : public ReviewError {
 public:
  using ReviewError::ReviewError;
};
class VerdictConflictError : public ReviewError {
 public:
  using ReviewError::ReviewError;
};
class BadVerdictError : public ReviewError {
 public:
  using ReviewError::ReviewError;
};
class VerdictRejectedError : public ReviewError {
 public:
  explicit VerdictRejectedError(std::vector<QcFinding> findings);
  const std::vector<QcFinding>& findings() const { return findings_; }

 private:
  std::vector<QcFinding> findings_;
};

// Decodes {action, edited_sample?, reviewer}; throws BadVerdictError.
VerdictRequest VerdictRequestFromJson(const nlohmann::json& body);

nlohmann::ordered_json ReviewItemToJson(const ReviewItem& item);
nlohmann::ordered_json ReviewStatsToJson(const ReviewStats& stats);

struct ReviewPage {
  std::vector<ReviewItem> items;
  std::optional<std::string> next_cursor;
};

class ReviewStore {
 public:
  using Clock = std::function<int64_t()>;

  // Creates the directory if needed and replays existing files.
  explicit ReviewStore(std::filesystem::path dir, Clock clock = {});

  // Adds a flagged item keyed by sample_id. Returns false if the id is
  // already queued.
  bool Enqueue(const CorruptedSample& sample, const std::vector<QcFinding>& findings);

  // Items sorted by id, strictly after `cursor`, optionally filtered.
  ReviewPage ListQueue(std::optional<ReviewStatus> status, const std::string& cursor,
                       size_t limit) const;
  std::optional<ReviewItem> GetItem(const std::string& item_id) const;

  // Appends the event durably, then applies it. Throws ItemNotFoundError,
  // VerdictConflictError, BadVerdictError or VerdictRejectedError.
  ReviewItem PostVerdict(const std::string& item_id, const VerdictRequest& verdict);

  ReviewStats Stats() const;
  ReviewState State() const;
  void WriteSnapshot() const;

  const std::filesystem::path& dir() const { return dir_; }

  // Rebuilds state from the files in `dir`, using only the first
  // `max_events` events when given.
  static ReviewState Replay(const std::filesystem::path& dir,
                            std::optional<size_t> max_events = std::nullopt);

  static std::filesystem::path QueuePath(const std::filesystem::path& dir);
  static std::filesystem::path EventsPath(const std::filesystem::path& dir);
  static std::filesystem::path SnapshotPath(const std::filesystem::path& dir);

 private:
  std::filesystem::path dir_;
  Clock clock_;
  mutable std::shared_mutex mu_;
  ReviewState state_;
};

}  // namespace reportfix

#endif  // REPORTFIX_QC_REVIEW_STORE_H_

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

#include "reportfix/qc/review_store.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <mutex>

#include "reportfix/report/dataset.h"

namespace reportfix {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::array<std::string_view, 4> kStatusNames = {"flagged", "accepted", "rejected",
                                                          "edited"};
constexpr std::array<std::string_view, 3> kActionNames = {"accept", "reject", "edit"};

// Appends one line and returns only after it reached the disk.
void AppendDurable(const std::filesystem::path& path, const std::string& line) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) throw std::runtime_error("cannot open " + path.string() + ": " + std::strerror(errno));
  std::string data = line + "\n";
  const char* p = data.data();
  size_t left = data.size();
  while (left > 0) {
    const ssize_t n = ::write(fd, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      throw std::runtime_error("write to " + path.string() + " failed: " + std::strerror(err));
    }
    p += n;
    left -= static_cast<size_t>(n);
  }
  if (::fsync(fd) != 0) {
    const int err = errno;
    ::close(fd);
    throw std::runtime_error("fsync of " + path.string() + " failed: " + std::strerror(err));
  }
  ::close(fd);
}

// Complete lines only; a torn final line from a crash is ignored.
std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::vector<std::string> lines;
  if (!std::filesystem::exists(path)) return lines;
  const std::string text = ReadFileToString(path);
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) break;
    if (eol > pos) lines.emplace_back(text.substr(pos, eol - pos));
    pos = eol + 1;
  }
  return lines;
}

QcFinding FindingFromJson(const json& j) {
  QcFinding f;
  f.sample_id = j.at("sample_id").get<std::string>();
  const auto code = ParseCheckCode(j.at("check_code").get<std::string>());
  if (!code) throw std::runtime_error("unknown check_code in queue");
  f.check_code = *code;
  f.severity = j.at("severity").get<std::string>() == "error" ? Severity::kError
                                                              : Severity::kWarning;
  f.message = j.at("message").get<std::string>();
  return f;
}

ordered_json EventToJson(const ReviewEvent& e) {
  ordered_json j;
  j["seq"] = e.seq;
  j["item_id"] = e.item_id;
  j["action"] = std::string(ToString(e.action));
  j["reviewer"] = e.reviewer;
  j["timestamp"] = e.timestamp;
  if (e.edited_sample) j["edited_sample"] = SampleToJson(*e.edited_sample);
  return j;
}

ReviewEvent EventFromJson(const json& j) {
  ReviewEvent e;
  e.seq = j.at("seq").get<uint64_t>();
  e.item_id = j.at("item_id").get<std::string>();
  const auto action = ParseVerdictAction(j.at("action").get<std::string>());
  if (!action) throw std::runtime_error("unknown action in event log");
  e.action = *action;
  e.reviewer = j.at("reviewer").get<std::string>();
  e.timestamp = j.at("timestamp").get<int64_t>();
  if (auto it = j.find("edited_sample"); it != j.end()) e.edited_sample = SampleFromJson(*it);
  return e;
}

int64_t SystemSeconds() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

ReviewItem NewItem(const CorruptedSample& sample, std::vector<QcFinding> findings) {
  ReviewItem item;
  item.item_id = sample.sample_id;
  item.sample = sample;
  item.findings = std::move(findings);
  return item;
}

}  // namespace

std::string_view ToString(ReviewStatus status) { return kStatusNames[static_cast<size_t>(status)]; }

std::optional<ReviewStatus> ParseReviewStatus(std::string_view text) {
  for (size_t i = 0; i < kStatusNames.size(); ++i) {
    if (kStatusNames[i] == text) return static_cast<ReviewStatus>(i);
  }
  return std::nullopt;
}

std::string_view ToString(VerdictAction action) { return kActionNames[static_cast<size_t>(action)]; }

std::optional<VerdictAction> ParseVerdictAction(std::string_view text) {
  for (size_t i = 0; i < kActionNames.size(); ++i) {
    if (kActionNames[i] == text) return static_cast<VerdictAction>(i);
  }
  return std::nullopt;
}

void ReviewState::Apply(const ReviewEvent& event) {
  if (event.seq != last_seq + 1) {
    throw std::logic_error("event seq " + std::to_string(event.seq) + " does not follow " +
                           std::to_string(last_seq));
  }
  auto it = items.find(event.item_id);
  if (it == items.end()) throw std::logic_error("event for unknown item " + event.item_id);
  ReviewItem& item = it->second;
  if (item.status != ReviewStatus::kFlagged) {
    throw std::logic_error("event for already reviewed item " + event.item_id);
  }
  switch (event.action) {
    case VerdictAction::kAccept:
      item.status = ReviewStatus::kAccepted;
      break;
    case VerdictAction::kReject:
      item.status = ReviewStatus::kRejected;
      break;
    case VerdictAction::kEdit:
      if (!event.edited_sample) throw std::logic_error("edit event without edited_sample");
      item.status = ReviewStatus::kEdited;
      item.edited_sample = event.edited_sample;
      break;
  }
  item.reviewer = event.reviewer;
  item.updated_at = event.timestamp;
  last_seq = event.seq;
}

ReviewStats ReviewState::Stats() const {
  ReviewStats stats;
  for (std::string_view s : kStatusNames) stats.by_status[std::string(s)] = 0;
  for (CheckCode c : kAllCheckCodes) stats.by_check_code[std::string(ToString(c))] = 0;
  for (const auto& [id, item] : items) {
    ++stats.total;
    ++stats.by_status[std::string(ToString(item.status))];
    std::array<bool, kNumCheckCodes> seen{};
    for (const QcFinding& f : item.findings) seen[Index(f.check_code)] = true;
    for (CheckCode c : kAllCheckCodes) {
      if (seen[Index(c)]) ++stats.by_check_code[std::string(ToString(c))];
    }
  }
  return stats;
}

std::string ReviewState::SnapshotJson() const {
  ordered_json j;
  j["last_seq"] = last_seq;
  j["stats"] = ReviewStatsToJson(Stats());
  ordered_json arr = ordered_json::array();
  for (const auto& [id, item] : items) arr.push_back(ReviewItemToJson(item));
  j["items"] = std::move(arr);
  return j.dump();
}

VerdictRejectedError::VerdictRejectedError(std::vector<QcFinding> findings)
    : ReviewError("edited sample fails structural checks"), findings_(std::move(findings)) {}

VerdictRequest VerdictRequestFromJson(const json& body) {
  if (!body.is_object()) throw BadVerdictError("body must be an object");
  for (auto it = body.begin(); it != body.end(); ++it) {
    if (it.key() != "action" && it.key() != "edited_sample" && it.key() != "reviewer") {
      throw BadVerdictError("unknown field " + it.key());
    }
  }
  VerdictRequest v;
  const auto action = body.find("action");
  if (action == body.end() || !action->is_string()) throw BadVerdictError("action is required");
  const auto parsed = ParseVerdictAction(action->get<std::string>());
  if (!parsed) throw BadVerdictError("action must be accept, reject or edit");
  v.action = *parsed;
  const auto reviewer = body.find("reviewer");
  if (reviewer == body.end() || !reviewer->is_string() || reviewer->get<std::string>().empty()) {
    throw BadVerdictError("reviewer is required");
  }
  v.reviewer = reviewer->get<std::string>();
  const auto edited = body.find("edited_sample");
  const bool has_edit = edited != body.end() && !edited->is_null();
  if (has_edit != (v.action == VerdictAction::kEdit)) {
    throw BadVerdictError("edited_sample is required for edit and only for edit");
  }
  if (has_edit) {
    try {
      v.edited_sample = SampleFromJson(*edited);
    } catch (const DatasetError& e) {
      throw BadVerdictError(std::string("edited_sample: ") + e.what());
    }
  }
  return v;
}

ordered_json ReviewItemToJson(const ReviewItem& item) {
  ordered_json j;
  j["item_id"] = item.item_id;
  j["status"] = std::string(ToString(item.status));
  j["sample"] = SampleToJson(item.sample);
  j["findings"] = FindingsToJson(item.findings);
  if (item.edited_sample) j["edited_sample"] = SampleToJson(*item.edited_sample);
  if (!item.reviewer.empty()) {
    j["reviewer"] = item.reviewer;
    j["updated_at"] = item.updated_at;
  }
  return j;
}

ordered_json ReviewStatsToJson(const ReviewStats& stats) {
  ordered_json j;
  ordered_json by_status;
  for (std::string_view s : kStatusNames) by_status[std::string(s)] = stats.by_status.at(std::string(s));
  j["by_status"] = std::move(by_status);
  ordered_json by_code;
  for (CheckCode c : kAllCheckCodes) {
    by_code[std::string(ToString(c))] = stats.by_check_code.at(std::string(ToString(c)));
  }
  j["by_check_code"] = std::move(by_code);
  j["total"] = stats.total;
  return j;
}

std::filesystem::path ReviewStore::QueuePath(const std::filesystem::path& dir) {
  return dir / "queue.jsonl";
}
std::filesystem::path ReviewStore::EventsPath(const std::filesystem::path& dir) {
  return dir / "events.jsonl";
}
std::filesystem::path ReviewStore::SnapshotPath(const std::filesystem::path& dir) {
  return dir / "snapshot.json";
}

ReviewState ReviewStore::Replay(const std::filesystem::path& dir, std::optional<size_t> max_events) {
  ReviewState state;
  for (const std::string& line : ReadLines(QueuePath(dir))) {
    const json j = json::parse(line);
    std::vector<QcFinding> findings;
    for (const json& f : j.at("findings")) findings.push_back(FindingFromJson(f));
    ReviewItem item = NewItem(SampleFromJson(j.at("sample")), std::move(findings));
    item.item_id = j.at("item_id").get<std::string>();
    state.items.emplace(item.item_id, std::move(item));
  }
  size_t applied = 0;
  for (const std::string& line : ReadLines(EventsPath(dir))) {
    if (max_events && applied >= *max_events) break;
    state.Apply(EventFromJson(json::parse(line)));
    ++applied;
  }
  return state;
}

ReviewStore::ReviewStore(std::filesystem::path dir, Clock clock)
    : dir_(std::move(dir)), clock_(clock ? std::move(clock) : Clock(SystemSeconds)) {
  std::filesystem::create_directories(dir_);
  state_ = Replay(dir_);
}

bool ReviewStore::Enqueue(const CorruptedSample& sample, const std::vector<QcFinding>& findings) {
  std::unique_lock lock(mu_);
  if (state_.items.count(sample.sample_id) > 0) return false;
  ordered_json j;
  j["item_id"] = sample.sample_id;
  j["sample"] = SampleToJson(sample);
  j["findings"] = FindingsToJson(findings);
  AppendDurable(QueuePath(dir_), j.dump());
  state_.items.emplace(sample.sample_id, NewItem(sample, findings));
  return true;
}

ReviewPage ReviewStore::ListQueue(std::optional<ReviewStatus> status, const std::string& cursor,
                                  size_t limit) const {
  std::shared_lock lock(mu_);
  ReviewPage page;
  auto it = cursor.empty() ? state_.items.begin() : state_.items.upper_bound(cursor);
  for (; it != state_.items.end(); ++it) {
    if (status && it->second.status != *status) continue;
    if (page.items.size() == limit) {
      page.next_cursor = page.items.back().item_id;
      break;
    }
    page.items.push_back(it->second);
  }
  return page;
}

std::optional<ReviewItem> ReviewStore::GetItem(const std::string& item_id) const {
  std::shared_lock lock(mu_);
  auto it = state_.items.find(item_id);
  if (it == state_.items.end()) return std::nullopt;
  return it->second;
}

ReviewItem ReviewStore::PostVerdict(const std::string& item_id, const VerdictRequest& verdict) {
  if (verdict.reviewer.empty()) throw BadVerdictError("reviewer is required");
  if (verdict.edited_sample.has_value() != (verdict.action == VerdictAction::kEdit)) {
    throw BadVerdictError("edited_sample is required for edit and only for edit");
  }
  std::optional<CorruptedSample> edited = verdict.edited_sample;
  if (edited) {
    if (edited->sample_id.empty()) edited->sample_id = item_id;
    if (edited->sample_id != item_id) {
      throw BadVerdictError("edited_sample.sample_id must match the item id");
    }
  }

  std::unique_lock lock(mu_);
  auto it = state_.items.find(item_id);
  if (it == state_.items.end()) throw ItemNotFoundError("no item " + item_id);
  if (it->second.status != ReviewStatus::kFlagged) {
    throw VerdictConflictError("item " + item_id + " is already " +
                               std::string(ToString(it->second.status)));
  }
  if (edited) {
    std::vector<QcFinding> errors;
    for (QcFinding& f : ValidateSample(*edited)) {
      if (f.severity == Severity::kError) errors.push_back(std::move(f));
    }
    if (!errors.empty()) throw VerdictRejectedError(std::move(errors));
  }
  ReviewEvent event{state_.last_seq + 1, item_id, verdict.action, verdict.reviewer, clock_(),
                    std::move(edited)};
  AppendDurable(EventsPath(dir_), EventToJson(event).dump());
  state_.Apply(event);
  return state_.items.at(item_id);
}

ReviewStats ReviewStore::Stats() const {
  std::shared_lock lock(mu_);
  return state_.Stats();
}

ReviewState ReviewStore::State() const {
  std::shared_lock lock(mu_);
  return state_;
}

void ReviewStore::WriteSnapshot() const {
  const std::string snapshot = State().SnapshotJson();
  const auto tmp = SnapshotPath(dir_).string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << snapshot << "\n";
    if (!out) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, SnapshotPath(dir_));
}

}  // namespace reportfix

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

#include "reportfix/qc/review_server.h"

#include <charconv>

#include "httplib.h"

namespace reportfix {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void Reply(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void ReplyError(httplib::Response& res, int status, const std::string& message) {
  ordered_json body;
  body["error"] = message;
  Reply(res, status, body);
}

}  // namespace

struct ReviewServer::Impl {
  explicit Impl(ReviewStore& s) : store(s) {}
  ReviewStore& store;
  httplib::Server server;

  void ListQueue(const httplib::Request& req, httplib::Response& res) {
    std::optional<ReviewStatus> status = ReviewStatus::kFlagged;
    if (req.has_param("status")) {
      const std::string s = req.get_param_value("status");
      if (s == "all") {
        status.reset();
      } else {
        status = ParseReviewStatus(s);
        if (!status) return ReplyError(res, 400, "unknown status " + s);
      }
    }
    size_t limit = kDefaultPageSize;
    if (req.has_param("limit")) {
      const std::string s = req.get_param_value("limit");
      const auto r = std::from_chars(s.data(), s.data() + s.size(), limit);
      if (r.ec != std::errc() || r.ptr != s.data() + s.size() || limit == 0 ||
          limit > kMaxPageSize) {
        return ReplyError(res, 400, "limit must be an integer in [1, 500]");
      }
    }
    const std::string cursor = req.has_param("cursor") ? req.get_param_value("cursor") : "";
    const ReviewPage page = store.ListQueue(status, cursor, limit);
    ordered_json body;
    ordered_json items = ordered_json::array();
    for (const ReviewItem& item : page.items) items.push_back(ReviewItemToJson(item));
    body["items"] = std::move(items);
    body["next_cursor"] = page.next_cursor ? ordered_json(*page.next_cursor) : ordered_json();
    Reply(res, 200, body);
  }

  void GetItem(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const auto item = store.GetItem(id);
    if (!item) return ReplyError(res, 404, "no item " + id);
    Reply(res, 200, ReviewItemToJson(*item));
  }

  void PostVerdict(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    const json body = json::parse(req.body, nullptr, false);
    if (body.is_discarded()) return ReplyError(res, 400, "body is not valid JSON");
    try {
      const VerdictRequest verdict = VerdictRequestFromJson(body);
      Reply(res, 200, ReviewItemToJson(store.PostVerdict(id, verdict)));
    } catch (const BadVerdictError& e) {
      ReplyError(res, 400, e.what());
    } catch (const ItemNotFoundError& e) {
      ReplyError(res, 404, e.what());
    } catch (const VerdictConflictError& e) {
      ReplyError(res, 409, e.what());
    } catch (const VerdictRejectedError& e) {
      ordered_json out;
      out["error"] = e.what();
      out["findings"] = FindingsToJson(e.findings());
      Reply(res, 422, out);
    }
  }
};

ReviewServer::ReviewServer(ReviewStore& store) : impl_(std::make_unique<Impl>(store)) {
  auto& s = impl_->server;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Headers", "Content-Type"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  s.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  s.Get("/api/queue", [this](const auto& req, auto& res) { impl_->ListQueue(req, res); });
  s.Get(R"(/api/items/([^/]+))", [this](const auto& req, auto& res) { impl_->GetItem(req, res); });
  s.Post(R"(/api/items/([^/]+)/verdict)",
         [this](const auto& req, auto& res) { impl_->PostVerdict(req, res); });
  s.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) {
    Reply(res, 200, ReviewStatsToJson(impl_->store.Stats()));
  });
  s.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      ReplyError(res, 500, e.what());
    } catch (...) {
      ReplyError(res, 500, "internal error");
    }
  });
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) ReplyError(res, res.status, "not found");
  });
}

ReviewServer::~ReviewServer() { Stop(); }

int ReviewServer::Bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ReviewServer::Serve() { return impl_->server.listen_after_bind(); }

void ReviewServer::Stop() { impl_->server.stop(); }

bool ReviewServer::IsRunning() const { return impl_->server.is_running(); }

}  // namespace reportfix

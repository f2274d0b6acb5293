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

#include <string>
#include <thread>

#include "defects.h"
#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "reportfix/qc/review_server.h"
#include "temp_dir.h"

namespace reportfix {
namespace {

using nlohmann::json;
using testing::SideSample;
using testing::TempDir;
using testing::WithDefect;

class RunningServer {
 public:
  explicit RunningServer(ReviewStore& store) : server_(store) {
    port_ = server_.Bind("127.0.0.1", 0);
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { server_.Serve(); });
    while (!server_.IsRunning()) std::this_thread::yield();
  }
  ~RunningServer() {
    server_.Stop();
    thread_.join();
  }
  int port() const { return port_; }

 private:
  ReviewServer server_;
  int port_ = -1;
  std::thread thread_;
};

void Seed(ReviewStore& store, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    const auto s = WithDefect(SideSample(8, i), kAllCheckCodes[i % 6]);
    store.Enqueue(s, ValidateSample(s));
  }
}

json Post(httplib::Client& c, const std::string& id, const json& body, int* status) {
  auto res = c.Post("/api/items/" + id + "/verdict", body.dump(), "application/json");
  REQUIRE(res);
  *status = res->status;
  return json::parse(res->body);
}

TEST_CASE("review service contract") {
  TempDir tmp;
  ReviewStore store(tmp.path());
  Seed(store, 60);
  RunningServer server(store);
  httplib::Client c("127.0.0.1", server.port());

  SUBCASE("queue, item and stats") {
    auto res = c.Get("/api/queue?limit=10");
    REQUIRE(res);
    CHECK(res->status == 200);
    const json page = json::parse(res->body);
    CHECK(page["items"].size() == 10);
    CHECK(page["next_cursor"] == page["items"][9]["item_id"]);
    auto next = c.Get("/api/queue?limit=10&cursor=" + page["next_cursor"].get<std::string>());
    CHECK(json::parse(next->body)["items"][0]["item_id"] > page["next_cursor"]);

    auto item = c.Get("/api/items/d3");
    REQUIRE(item);
    CHECK(item->status == 200);
    const json body = json::parse(item->body);
    CHECK(body["status"] == "flagged");
    CHECK(body["findings"][0]["check_code"] == "C4_EDIT_COUNT");
    CHECK(body["sample"]["sample_id"] == "d3");

    CHECK(c.Get("/api/items/missing")->status == 404);
    CHECK(c.Get("/api/queue?status=bogus")->status == 400);
    CHECK(c.Get("/api/queue?limit=0")->status == 400);

    const json stats = json::parse(c.Get("/api/stats")->body);
    CHECK(stats["by_status"]["flagged"] == 60);
    CHECK(stats["by_check_code"]["C1_SPAN_MISSING"] == 10);
  }

  SUBCASE("verdict errors") {
    int status = 0;
    Post(c, "d0", {{"action", "accept"}, {"reviewer", "a"}}, &status);
    CHECK(status == 200);
    Post(c, "d0", {{"action", "reject"}, {"reviewer", "a"}}, &status);
    CHECK(status == 409);
    Post(c, "zzz", {{"action", "reject"}, {"reviewer", "a"}}, &status);
    CHECK(status == 404);
    Post(c, "d1", {{"action", "accept"}}, &status);
    CHECK(status == 400);
    auto res = c.Post("/api/items/d1/verdict", "{oops", "application/json");
    CHECK(res->status == 400);

    CorruptedSample unchanged = WithDefect(SideSample(8, 1), CheckCode::kUnchangedEdit);
    const json rejected =
        Post(c, "d1", {{"action", "edit"}, {"reviewer", "a"}, {"edited_sample", SampleToJson(unchanged)}},
             &status);
    CHECK(status == 422);
    REQUIRE(rejected["findings"].size() >= 1);
    CHECK(rejected["findings"][0]["check_code"] == "C3_UNCHANGED_EDIT");
    CHECK(json::parse(c.Get("/api/items/d1")->body)["status"] == "flagged");
  }

  SUBCASE("fifty scripted verdicts match the replayed log") {
    Rng rng(31);
    int accepted = 0, rejected = 0, edited = 0;
    for (int k = 0; k < 50; ++k) {
      const std::string id = "d" + std::to_string(k);
      json body = {{"reviewer", "rev" + std::to_string(k % 4)}};
      switch (rng.Index(3)) {
        case 0:
          body["action"] = "accept";
          ++accepted;
          break;
        case 1:
          body["action"] = "reject";
          ++rejected;
          break;
        default:
          body["action"] = "edit";
          body["edited_sample"] = SampleToJson(SideSample(8, static_cast<size_t>(k)));
          ++edited;
      }
      int status = 0;
      const json item = Post(c, id, body, &status);
      REQUIRE(status == 200);
      CHECK(item["status"] != "flagged");
    }
    const std::string live = c.Get("/api/stats")->body;
    const json stats = json::parse(live);
    CHECK(stats["by_status"]["accepted"] == accepted);
    CHECK(stats["by_status"]["rejected"] == rejected);
    CHECK(stats["by_status"]["edited"] == edited);
    CHECK(stats["by_status"]["flagged"] == 10);
    const ReviewState replayed = ReviewStore::Replay(tmp.path());
    CHECK(ReviewStatsToJson(replayed.Stats()).dump() == live);
    CHECK(replayed.SnapshotJson() == store.State().SnapshotJson());
  }
}

}  // namespace
}  // namespace reportfix

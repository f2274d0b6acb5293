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

#include "reportfix/eval/scorer.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <sstream>
#include <thread>

#include "json.hpp"

extern char** environ;

namespace reportfix {
namespace {

class Fd {
 public:
  Fd() = default;
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { Close(); }
  void Reset(int fd) {
    Close();
    fd_ = fd;
  }
  int get() const { return fd_; }
  void Close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

void MakePipe(Fd& read_end, Fd& write_end) {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) throw ScorerError(std::string("pipe: ") + std::strerror(errno));
  read_end.Reset(fds[0]);
  write_end.Reset(fds[1]);
}

// Writes everything, with SIGPIPE blocked on this thread so a plugin that
// exits early shows up as EPIPE rather than killing the process.
bool WriteAll(int fd, const std::string& data) {
  sigset_t block, old;
  sigemptyset(&block);
  sigaddset(&block, SIGPIPE);
  pthread_sigmask(SIG_BLOCK, &block, &old);
  size_t off = 0;
  bool ok = true;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      ok = false;
      break;
    }
    off += static_cast<size_t>(n);
  }
  if (!ok) {
    const timespec zero{0, 0};
    sigtimedwait(&block, nullptr, &zero);
  }
  pthread_sigmask(SIG_SETMASK, &old, nullptr);
  return ok;
}

}  // namespace

SubprocessScorer::SubprocessScorer(ScorerSpec spec) : spec_(std::move(spec)) {
  if (spec_.name.empty()) throw std::invalid_argument("scorer name must not be empty");
  if (spec_.command.empty()) throw std::invalid_argument("scorer " + spec_.name + " has no command");
}

std::vector<double> SubprocessScorer::ScoreBatch(const std::vector<ScorePair>& pairs) {
  if (pairs.empty()) return {};
  std::string input;
  for (const ScorePair& p : pairs) {
    input += nlohmann::json{{"id", p.id}, {"candidate", p.candidate}, {"reference", p.reference}}
                 .dump() +
             "\n";
  }

  Fd in_read, in_write, out_read, out_write;
  MakePipe(in_read, in_write);
  MakePipe(out_read, out_write);
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_read.get(), STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_write.get(), STDOUT_FILENO);
  std::vector<char*> argv;
  for (const std::string& a : spec_.command) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw ScorerError(spec_.name + ": cannot start " + spec_.command[0] + ": " + std::strerror(rc));
  }
  in_read.Close();
  out_write.Close();

  bool write_ok = true;
  std::thread writer([&] {
    write_ok = WriteAll(in_write.get(), input);
    in_write.Close();
  });

  std::string output;
  bool timed_out = false;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(spec_.timeout_s);
  char buf[65536];
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      timed_out = true;
      break;
    }
    pollfd pfd{out_read.get(), POLLIN, 0};
    const int pr = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1000)));
    if (pr < 0 && errno != EINTR) break;
    if (pr <= 0) continue;
    const ssize_t n = ::read(out_read.get(), buf, sizeof(buf));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    output.append(buf, static_cast<size_t>(n));
  }
  if (timed_out) ::kill(pid, SIGKILL);
  out_read.Close();
  writer.join();
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }

  const std::string who = spec_.name + ": ";
  if (timed_out) throw ScorerError(who + "timed out");
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw ScorerError(who + "plugin exited abnormally (status " + std::to_string(status) + ")");
  }
  if (!write_ok) throw ScorerError(who + "plugin closed its input early");

  std::vector<double> scores;
  std::istringstream lines(output);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const size_t i = scores.size();
    if (i >= pairs.size()) throw ScorerError(who + "more responses than requests");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw ScorerError(who + "response " + std::to_string(i + 1) + " is not JSON");
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("score") || !j["score"].is_number()) {
      throw ScorerError(who + "response " + std::to_string(i + 1) + " lacks id or score");
    }
    if (j["id"] != pairs[i].id) {
      throw ScorerError(who + "response " + std::to_string(i + 1) + " is for id " +
                        j["id"].dump() + ", expected " + pairs[i].id);
    }
    const double s = j["score"].get<double>();
    if (!std::isfinite(s) || s < 0 || s > 1) {
      throw ScorerError(who + "score out of [0, 1] for " + pairs[i].id);
    }
    scores.push_back(s);
  }
  if (scores.size() != pairs.size()) {
    throw ScorerError(who + "got " + std::to_string(scores.size()) + " responses for " +
                      std::to_string(pairs.size()) + " requests");
  }
  return scores;
}

}  // namespace reportfix

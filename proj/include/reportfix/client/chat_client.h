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

// Minimal chat-completion client. Requests carry a model name, a message list
// and a temperature; the first text choice of the response is returned.

#ifndef REPORTFIX_CLIENT_CHAT_CLIENT_H_
#define REPORTFIX_CLIENT_CHAT_CLIENT_H_

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace reportfix {

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 1.0;
};

// Network failure, non-2xx status or a body without a text choice.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  // Single attempt. Callers own retry policy.
  virtual std::string Complete(const ChatRequest& request) = 0;
};

struct GenerationClientConfig {
  std::string endpoint_url = "http://127.0.0.1:8000/v1/chat/completions";
  std::string model_name = "generator";
  double request_timeout_s = 120.0;
  int max_retries = 3;
  double temperature = 0.7;
  // Environment variable holding a bearer token; unset or empty means none.
  std::string api_key_env = "REPORTFIX_API_KEY";
};

// Throws std::invalid_argument naming the offending field.
void ValidateGenerationClientConfig(const GenerationClientConfig& config);

std::string ChatRequestToJson(const ChatRequest& request);
// Returns choices[0].message.content (or choices[0].text); throws
// TransportError when neither is present.
std::string FirstChoiceText(const std::string& response_body);

class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(GenerationClientConfig config);
  std::string Complete(const ChatRequest& request) override;

 private:
  GenerationClientConfig config_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
};

}  // namespace reportfix

#endif  // REPORTFIX_CLIENT_CHAT_CLIENT_H_

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

#include "reportfix/client/chat_client.h"

#include <cmath>
#include <cstdlib>

#include "httplib.h"
#include "json.hpp"

namespace reportfix {

using nlohmann::json;

void ValidateGenerationClientConfig(const GenerationClientConfig& config) {
  if (config.endpoint_url.empty()) throw std::invalid_argument("endpoint_url must be set");
  if (config.model_name.empty()) throw std::invalid_argument("model_name must be set");
  if (!(config.request_timeout_s > 0)) {
    throw std::invalid_argument("request_timeout_s must be positive");
  }
  if (config.max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (!(config.temperature >= 0)) throw std::invalid_argument("temperature must be >= 0");
}

std::string ChatRequestToJson(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  json body = {{"model", request.model},
               {"messages", std::move(messages)},
               {"temperature", request.temperature}};
  return body.dump();
}

std::string FirstChoiceText(const std::string& response_body) {
  const json body = json::parse(response_body, nullptr, false);
  if (body.is_discarded()) throw TransportError("response is not valid JSON");
  const auto choices = body.find("choices");
  if (choices == body.end() || !choices->is_array() || choices->empty()) {
    throw TransportError("response has no choices");
  }
  const json& first = (*choices)[0];
  if (auto msg = first.find("message"); msg != first.end() && msg->is_object()) {
    if (auto content = msg->find("content"); content != msg->end() && content->is_string()) {
      return content->get<std::string>();
    }
  }
  if (auto text = first.find("text"); text != first.end() && text->is_string()) {
    return text->get<std::string>();
  }
  throw TransportError("first choice carries no text");
}

HttpChatClient::HttpChatClient(GenerationClientConfig config) : config_(std::move(config)) {
  ValidateGenerationClientConfig(config_);
  const std::string& url = config_.endpoint_url;
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("endpoint_url must include a scheme: " + url);
  }
  const size_t path_begin = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_begin);
  path_ = path_begin == std::string::npos ? "/" : url.substr(path_begin);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (url.rfind("https://", 0) == 0) {
    throw std::invalid_argument("https endpoints need a build with OpenSSL");
  }
#endif
}

std::string HttpChatClient::Complete(const ChatRequest& request) {
  httplib::Client client(origin_);
  const auto seconds = static_cast<time_t>(config_.request_timeout_s);
  const auto micros = static_cast<time_t>(
      std::fmod(config_.request_timeout_s, 1.0) * 1e6);
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);
  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key) {
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  auto res = client.Post(path_, headers, ChatRequestToJson(request), "application/json");
  if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) {
    throw TransportError("endpoint returned HTTP " + std::to_string(res->status));
  }
  return FirstChoiceText(res->body);
}

}  // namespace reportfix

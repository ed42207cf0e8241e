// Copyright 2026 The asrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asrec/chat_client.h"

#include <fmt/format.h>

#include "asrec/error.h"

namespace asrec {

HttpChatClient::HttpChatClient(HttpClientOptions options)
    : client_(std::move(options)) {}

std::string HttpChatClient::Complete(std::span<const ChatMessage> messages) {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  }
  const auto reply = client_.Post("", {{"messages", std::move(msgs)}});
  try {
    return reply.at("text").get<std::string>();
  } catch (const nlohmann::json::exception& ex) {
    throw ScorerError(fmt::format("malformed chat reply: {}", ex.what()), false);
  }
}

}  // namespace asrec

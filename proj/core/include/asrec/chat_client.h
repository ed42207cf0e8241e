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

#pragma once

#include <span>
#include <string>

#include "asrec/http_client.h"

namespace asrec {

struct ChatMessage {
  std::string role;
  std::string content;
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string Complete(std::span<const ChatMessage> messages) = 0;
};

// Generic chat endpoint: POST <url> {"messages":[{"role","content"}...]}
// -> {"text": str}. Vendor-specific schemas belong in an adapter service in
// front of this contract.
class HttpChatClient final : public ChatClient {
 public:
  explicit HttpChatClient(HttpClientOptions options);
  std::string Complete(std::span<const ChatMessage> messages) override;
  HttpStats stats() const { return client_.stats(); }

 private:
  JsonHttpClient client_;
};

}  // namespace asrec

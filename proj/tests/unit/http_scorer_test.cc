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

#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <chrono>
#include <deque>
#include <future>
#include <thread>

#include <nlohmann/json.hpp>

#include "asrec/chat_client.h"
#include "asrec/error.h"
#include "asrec/http_scorer.h"
#include "asrec/toy_scorer.h"
#include "toy_server.h"

namespace asrec {
namespace {

using namespace std::chrono_literals;

HttpClientOptions Fast(const std::string& url, int attempts = 4) {
  HttpClientOptions o;
  o.base_url = url;
  o.retry.max_attempts = attempts;
  o.retry.initial_backoff = 1ms;
  o.retry.max_backoff = 5ms;
  o.timeout = 5000ms;
  return o;
}

// Replies with a queue of canned (status, body) pairs, then 200 {"ok": true}.
class ScriptedServer : public testing::LocalServer {
 public:
  explicit ScriptedServer(std::deque<std::pair<int, std::string>> script,
                          std::chrono::milliseconds delay = 0ms)
      : script_(std::move(script)), delay_(delay) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) {
      const int now = ++active_;
      int seen = peak_.load();
      while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
      }
      std::this_thread::sleep_for(delay_);
      std::pair<int, std::string> reply{200, R"({"ok":true})"};
      {
        std::lock_guard lock(mu_);
        paths_.push_back(req.path);
        if (!script_.empty()) {
          reply = script_.front();
          script_.pop_front();
        }
      }
      res.status = reply.first;
      res.set_content(reply.second, "application/json");
      --active_;
    };
    server().Post(R"(/.*)", handler);
    server().Post("/", handler);
    server().Get(R"(/.*)", handler);
    Start();
  }

  int peak() const { return peak_.load(); }
  std::vector<std::string> paths() const {
    std::lock_guard lock(mu_);
    return paths_;
  }

 private:
  std::deque<std::pair<int, std::string>> script_;
  std::chrono::milliseconds delay_;
  std::atomic<int> active_{0};
  std::atomic<int> peak_{0};
  mutable std::mutex mu_;
  std::vector<std::string> paths_;
};

TEST(HttpScorer, MatchesInProcessToyScorer) {
  testing::ToyScorerServer server;
  HttpScorer remote(Fast(server.url()));
  ToyScorer local;
  const ScorerContext ctx{"the gut and the gullet[SEP]the gut in the gullet[SEP]a gut and the gullet", 3};
  const std::vector<std::string> cands{"the gut and the gullet", "a gut", "caf\xC3\xA9"};
  const auto r = remote.ScoreSequences(ctx, cands);
  const auto l = local.ScoreSequences(ctx, cands);
  ASSERT_EQ(r.size(), l.size());
  for (size_t i = 0; i < r.size(); ++i) EXPECT_NEAR(r[i], l[i], 1e-12);

  const std::vector<std::string> hist{"the", "gut"};
  const std::vector<std::string> step{"and", "in", std::string(kEndOfSequence)};
  const auto rs = remote.DecoderStep(ctx, hist, step);
  const auto ls = local.DecoderStep(ctx, hist, step);
  for (size_t i = 0; i < rs.size(); ++i) EXPECT_NEAR(rs[i], ls[i], 1e-12);

  EXPECT_EQ(remote.Generate(ctx), local.Generate(ctx));
  EXPECT_EQ(remote.Info().name, "toy-char-bigram");
  EXPECT_EQ(remote.stats().requests, 4);
  EXPECT_EQ(remote.stats().retries, 0);
}

TEST(HttpScorer, RetriesTransientFailuresWithSameRequestId) {
  testing::ToyScorerServer server(/*fail_first=*/2);
  HttpScorer remote(Fast(server.url()));
  const double got = remote.ScoreSequence({"a b", 1}, "a b");
  ToyScorer local;
  EXPECT_NEAR(got, local.ScoreSequence({"a b", 1}, "a b"), 1e-12);
  const auto s = remote.stats();
  EXPECT_EQ(s.requests, 1);
  EXPECT_EQ(s.attempts, 3);
  EXPECT_EQ(s.retries, 2);
  EXPECT_EQ(s.failures, 0);
  const auto ids = server.request_ids();
  ASSERT_EQ(ids.size(), 3u);
  EXPECT_FALSE(ids[0].empty());
  EXPECT_EQ(ids[0], ids[1]);
  EXPECT_EQ(ids[1], ids[2]);
  remote.ScoreSequence({"a b", 1}, "a");
  EXPECT_NE(server.request_ids().back(), ids[0]);
}

TEST(HttpScorer, GivesUpAfterMaxAttempts) {
  testing::ToyScorerServer server(/*fail_first=*/100);
  HttpScorer remote(Fast(server.url(), 3));
  try {
    remote.ScoreSequence({"a", 1}, "a");
    FAIL();
  } catch (const ScorerError& ex) {
    EXPECT_TRUE(ex.retryable());
  }
  EXPECT_EQ(server.requests(), 3);
  EXPECT_EQ(remote.stats().attempts, 3);
  EXPECT_EQ(remote.stats().failures, 1);
}

TEST(HttpClient, TooManyRequestsIsRetried) {
  ScriptedServer server({{429, R"({"error":"slow down"})"}, {200, R"({"v":1})"}});
  JsonHttpClient client(Fast(server.url()));
  EXPECT_EQ(client.Post("/x", {{"a", 1}}).at("v"), 1);
  EXPECT_EQ(client.stats().retries, 1);
}

TEST(HttpClient, ClientErrorsAreNotRetried) {
  for (int status : {400, 404, 422}) {
    ScriptedServer server({{status, R"({"error":"bad"})"}});
    JsonHttpClient client(Fast(server.url()));
    try {
      client.Post("/v1/score", {{"context", "a"}});
      FAIL();
    } catch (const ScorerError& ex) {
      EXPECT_FALSE(ex.retryable());
      EXPECT_NE(std::string(ex.what()).find(std::to_string(status)), std::string::npos);
    }
    EXPECT_EQ(client.stats().attempts, 1) << status;
    EXPECT_EQ(client.stats().failures, 1);
  }
}

TEST(HttpClient, ToyServerRejectsMalformedBody) {
  testing::ToyScorerServer server;
  JsonHttpClient client(Fast(server.url()));
  EXPECT_THROW(client.Post("/v1/score", {{"context", "a"}}), ScorerError);
  EXPECT_EQ(server.requests(), 1);
}

TEST(HttpClient, NonJsonReplyIsFatal) {
  ScriptedServer server({{200, "<html>"}});
  JsonHttpClient client(Fast(server.url()));
  EXPECT_THROW(client.Get("/v1/info"), ScorerError);
  EXPECT_EQ(client.stats().attempts, 1);
}

TEST(HttpClient, UnreachableHostIsRetryable) {
  std::string url;
  {
    ScriptedServer gone({});
    url = gone.url();
  }
  JsonHttpClient client(Fast(url, 2));
  try {
    client.Get("/v1/info");
    FAIL();
  } catch (const ScorerError& ex) {
    EXPECT_TRUE(ex.retryable());
  }
  EXPECT_EQ(client.stats().attempts, 2);
}

TEST(HttpClient, PrefixAndMissingScheme) {
  ScriptedServer server({});
  JsonHttpClient client(Fast(server.url() + "/api/"));
  client.Get("/v1/info");
  EXPECT_EQ(server.paths().back(), "/api/v1/info");
  EXPECT_THROW(JsonHttpClient(Fast("localhost:80")), InvalidArgument);
}

TEST(HttpClient, BoundsRequestsInFlight) {
  ScriptedServer server({}, 30ms);
  auto opts = Fast(server.url());
  opts.max_in_flight = 2;
  JsonHttpClient client(opts);
  std::vector<std::future<void>> jobs;
  for (int i = 0; i < 8; ++i) {
    jobs.push_back(std::async(std::launch::async, [&] { client.Post("/p", {{"i", 1}}); }));
  }
  for (auto& j : jobs) j.get();
  EXPECT_LE(server.peak(), 2);
  EXPECT_GE(server.peak(), 1);
  EXPECT_EQ(client.stats().requests, 8);
}

TEST(HttpScorer, ConcurrentCallsReturnMatchingResults) {
  testing::ToyScorerServer server;
  HttpScorer remote(Fast(server.url()));
  ToyScorer local;
  std::vector<std::future<void>> jobs;
  for (int i = 0; i < 16; ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      const ScorerContext ctx{"ctx " + std::to_string(i) + "[SEP]other", 2};
      const std::string cand = "cand " + std::to_string(i * 7);
      EXPECT_NEAR(remote.ScoreSequence(ctx, cand), local.ScoreSequence(ctx, cand), 1e-12);
    }));
  }
  for (auto& j : jobs) j.get();
  EXPECT_EQ(remote.stats().requests, 16);
}

TEST(HttpScorer, MalformedRepliesAreFatal) {
  ScriptedServer server({{200, R"({"logprobs":[1.0, 2.0]})"},
                         {200, R"({"nope":1})"},
                         {200, R"({"name":"x"})"}});
  HttpScorer remote(Fast(server.url()));
  const std::vector<std::string> one{"a"};
  EXPECT_THROW(remote.ScoreSequences({"a", 1}, one), ScorerError);
  EXPECT_THROW(remote.ScoreSequences({"a", 1}, one), ScorerError);
  EXPECT_THROW(remote.Info(), ScorerError);
}

TEST(HttpChatClient, SendsMessagesAndBearerToken) {
  testing::FakeChatServer server([](const std::string& prompt) { return "echo: " + prompt; });
  auto opts = Fast(server.url());
  opts.bearer_token = "test-token";
  HttpChatClient chat(opts);
  const std::vector<ChatMessage> msgs{{"system", "be brief"}, {"user", "hello"}};
  EXPECT_EQ(chat.Complete(msgs), "echo: hello");
  EXPECT_EQ(server.last_authorization(), "Bearer test-token");
  EXPECT_EQ(chat.stats().requests, 1);
}

TEST(HttpChatClient, MalformedReply) {
  ScriptedServer server({{200, R"({"choices":[]})"}});
  HttpChatClient chat(Fast(server.url()));
  const std::vector<ChatMessage> msgs{{"user", "hi"}};
  try {
    chat.Complete(msgs);
    FAIL();
  } catch (const ScorerError& ex) {
    EXPECT_FALSE(ex.retryable());
  }
  EXPECT_EQ(server.paths().back(), "/");
}

}  // namespace
}  // namespace asrec

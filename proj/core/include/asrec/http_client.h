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

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

namespace asrec {

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds initial_backoff{200};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{5000};
  double jitter = 0.25;  // +/- fraction applied to each backoff
  uint64_t seed = 0;
};

struct HttpClientOptions {
  std::string base_url;  // "http://host:port[/prefix]", https supported
  RetryPolicy retry;
  std::chrono::milliseconds timeout{30000};
  int max_in_flight = 4;
  std::string bearer_token;  // sent as "Authorization: Bearer ..." if set
};

struct HttpStats {
  int64_t requests = 0;
  int64_t attempts = 0;
  int64_t retries = 0;
  int64_t failures = 0;
};

// JSON-over-HTTP client shared by the scorer and chat backends. Transport
// errors, timeouts and 5xx/429 replies are retried with jittered
// exponential backoff; other 4xx replies fail at once. Thread-safe; at most
// `max_in_flight` requests are outstanding. Every request carries an
// X-Request-Id header; the reply is the one read back on that exchange.
// Failures throw ScorerError (retryable() tells whether retrying could help).
class JsonHttpClient {
 public:
  explicit JsonHttpClient(HttpClientOptions options);

  nlohmann::json Post(const std::string& path, const nlohmann::json& body);
  nlohmann::json Get(const std::string& path);

  HttpStats stats() const;
  const HttpClientOptions& options() const { return options_; }

 private:
  nlohmann::json Send(const std::string& method, const std::string& path,
                      const nlohmann::json* body);
  std::chrono::milliseconds Backoff(int attempt);

  HttpClientOptions options_;
  std::string scheme_host_port_;
  std::string prefix_;

  std::mutex slots_mu_;
  std::condition_variable slots_cv_;
  int in_flight_ = 0;

  std::mutex rng_mu_;
  std::mt19937_64 rng_;

  std::atomic<int64_t> next_id_{1};
  std::atomic<int64_t> requests_{0};
  std::atomic<int64_t> attempts_{0};
  std::atomic<int64_t> retries_{0};
  std::atomic<int64_t> failures_{0};
};

}  // namespace asrec

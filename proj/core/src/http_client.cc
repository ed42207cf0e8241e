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

#include "asrec/http_client.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "asrec/error.h"

namespace asrec {

JsonHttpClient::JsonHttpClient(HttpClientOptions options)
    : options_(std::move(options)), rng_(options_.retry.seed) {
  const std::string& url = options_.base_url;
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw InvalidArgument(fmt::format("URL '{}' lacks a scheme", url));
  }
  const size_t path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  if (path_start != std::string::npos) {
    prefix_ = url.substr(path_start);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }
  options_.max_in_flight = std::max(1, options_.max_in_flight);
  options_.retry.max_attempts = std::max(1, options_.retry.max_attempts);
}

nlohmann::json JsonHttpClient::Post(const std::string& path,
                                    const nlohmann::json& body) {
  return Send("POST", path, &body);
}

nlohmann::json JsonHttpClient::Get(const std::string& path) {
  return Send("GET", path, nullptr);
}

HttpStats JsonHttpClient::stats() const {
  return {requests_.load(), attempts_.load(), retries_.load(), failures_.load()};
}

std::chrono::milliseconds JsonHttpClient::Backoff(int attempt) {
  const auto& r = options_.retry;
  double ms = static_cast<double>(r.initial_backoff.count()) *
              std::pow(r.multiplier, attempt - 1);
  ms = std::min(ms, static_cast<double>(r.max_backoff.count()));
  if (r.jitter > 0) {
    std::lock_guard lock(rng_mu_);
    std::uniform_real_distribution<double> dist(-r.jitter, r.jitter);
    ms *= 1.0 + dist(rng_);
  }
  return std::chrono::milliseconds(static_cast<int64_t>(std::max(0.0, ms)));
}

nlohmann::json JsonHttpClient::Send(const std::string& method,
                                    const std::string& path,
                                    const nlohmann::json* body) {
  {
    std::unique_lock lock(slots_mu_);
    slots_cv_.wait(lock, [&] { return in_flight_ < options_.max_in_flight; });
    ++in_flight_;
  }
  struct Release {
    JsonHttpClient* self;
    ~Release() {
      {
        std::lock_guard lock(self->slots_mu_);
        --self->in_flight_;
      }
      self->slots_cv_.notify_one();
    }
  } release{this};

  ++requests_;
  std::string full_path = prefix_ + path;
  if (full_path.empty()) full_path = "/";
  const std::string payload = body ? body->dump() : std::string();
  const std::string request_id = std::to_string(next_id_++);
  httplib::Headers headers{{"X-Request-Id", request_id}};
  if (!options_.bearer_token.empty()) {
    headers.emplace("Authorization", "Bearer " + options_.bearer_token);
  }

  std::string last_error;
  for (int attempt = 1; attempt <= options_.retry.max_attempts; ++attempt) {
    if (attempt > 1) {
      ++retries_;
      std::this_thread::sleep_for(Backoff(attempt - 1));
    }
    ++attempts_;
    httplib::Client client(scheme_host_port_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
        options_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    auto result = method == "POST"
                      ? client.Post(full_path, headers, payload, "application/json")
                      : client.Get(full_path, headers);
    if (!result) {
      last_error = fmt::format("{} {}{}: {}", method, scheme_host_port_, full_path,
                               httplib::to_string(result.error()));
      continue;
    }
    const int status = result->status;
    if (status == 429 || status >= 500) {
      last_error = fmt::format("{} {}: HTTP {}", method, full_path, status);
      continue;
    }
    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception&) {
      ++failures_;
      throw ScorerError(fmt::format("{} {}: reply is not JSON (HTTP {})", method,
                                    full_path, status),
                        false);
    }
    if (status >= 400) {
      ++failures_;
      const std::string detail =
          reply.is_object() && reply.contains("error") ? reply["error"].dump() : result->body;
      throw ScorerError(
          fmt::format("{} {}: HTTP {}: {}", method, full_path, status, detail), false);
    }
    return reply;
  }
  ++failures_;
  throw ScorerError(fmt::format("giving up after {} attempts: {}",
                                options_.retry.max_attempts, last_error),
                    true);
}

}  // namespace asrec

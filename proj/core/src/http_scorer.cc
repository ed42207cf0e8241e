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

#include "asrec/http_scorer.h"

#include <cmath>

#include <fmt/format.h>

#include "asrec/error.h"

namespace asrec {

namespace {

std::vector<double> ReadLogprobs(const nlohmann::json& reply, size_t expected) {
  try {
    auto out = reply.at("logprobs").get<std::vector<double>>();
    if (out.size() != expected) {
      throw ScorerError(fmt::format("expected {} logprobs, got {}", expected,
                                    out.size()),
                        false);
    }
    for (double v : out) {
      if (!std::isfinite(v)) throw ScorerError("non-finite logprob in reply", false);
    }
    return out;
  } catch (const nlohmann::json::exception& ex) {
    throw ScorerError(fmt::format("malformed scorer reply: {}", ex.what()), false);
  }
}

}  // namespace

HttpScorer::HttpScorer(HttpClientOptions options) : client_(std::move(options)) {}

ScorerInfo HttpScorer::Info() {
  const auto reply = client_.Get("/v1/info");
  try {
    return {reply.at("name").get<std::string>(),
            reply.at("tokenizer").get<std::string>()};
  } catch (const nlohmann::json::exception& ex) {
    throw ScorerError(fmt::format("malformed /v1/info reply: {}", ex.what()), false);
  }
}

std::vector<double> HttpScorer::DoScore(const ScorerContext& ctx,
                                        std::span<const std::string> candidates) {
  const nlohmann::json body = {
      {"context", ctx.text},
      {"candidates", std::vector<std::string>(candidates.begin(), candidates.end())}};
  return ReadLogprobs(client_.Post("/v1/score", body), candidates.size());
}

std::vector<double> HttpScorer::DoStep(const ScorerContext& ctx,
                                       std::span<const std::string> history,
                                       std::span<const std::string> candidates) {
  const nlohmann::json body = {
      {"context", ctx.text},
      {"history", std::vector<std::string>(history.begin(), history.end())},
      {"candidates", std::vector<std::string>(candidates.begin(), candidates.end())}};
  return ReadLogprobs(client_.Post("/v1/step", body), candidates.size());
}

std::string HttpScorer::DoGenerate(const ScorerContext& ctx) {
  const auto reply = client_.Post("/v1/generate", {{"context", ctx.text}});
  try {
    return reply.at("text").get<std::string>();
  } catch (const nlohmann::json::exception& ex) {
    throw ScorerError(fmt::format("malformed /v1/generate reply: {}", ex.what()), false);
  }
}

}  // namespace asrec

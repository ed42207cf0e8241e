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

#include <memory>

#include "asrec/http_client.h"
#include "asrec/scorer.h"

namespace asrec {

// Scorer reached over the JSON wire protocol:
//   POST /v1/score    {"context", "candidates": [str]}             -> {"logprobs": [float]}
//   POST /v1/step     {"context", "history": [str], "candidates"}  -> {"logprobs": [float]}
//   POST /v1/generate {"context"}                                  -> {"text": str}
//   GET  /v1/info                                                  -> {"name", "tokenizer"}
// Generated text is returned unmodified.
class HttpScorer final : public Scorer {
 public:
  explicit HttpScorer(HttpClientOptions options);

  ScorerInfo Info() override;
  HttpStats stats() const { return client_.stats(); }

 protected:
  std::vector<double> DoScore(const ScorerContext& ctx,
                              std::span<const std::string> candidates) override;
  std::vector<double> DoStep(const ScorerContext& ctx,
                             std::span<const std::string> history,
                             std::span<const std::string> candidates) override;
  std::string DoGenerate(const ScorerContext& ctx) override;

 private:
  JsonHttpClient client_;
};

}  // namespace asrec

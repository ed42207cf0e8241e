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

#include "asrec/scorer.h"

#include <algorithm>

#include <fmt/format.h>

#include "asrec/error.h"

namespace asrec {

ScorerContext ScorerContext::FromNBest(const NBestList& nbest, int n) {
  return {SepConcat(nbest, n), n};
}

double Scorer::ScoreSequence(const ScorerContext& ctx, std::string_view candidate) {
  const std::string c(candidate);
  return ScoreSequences(ctx, std::span<const std::string>(&c, 1)).front();
}

std::vector<double> Scorer::ScoreSequences(const ScorerContext& ctx,
                                           std::span<const std::string> candidates) {
  for (const auto& c : candidates) {
    if (c.find_first_not_of(" \t\n\r") == std::string::npos) {
      throw InvalidArgument("cannot score an empty candidate");
    }
  }
  if (candidates.empty()) return {};
  auto out = DoScore(ctx, candidates);
  if (out.size() != candidates.size()) {
    throw ScorerError(fmt::format("scorer returned {} scores for {} candidates",
                                  out.size(), candidates.size()),
                      false);
  }
  return out;
}

std::vector<double> Scorer::DecoderStep(const ScorerContext& ctx,
                                        std::span<const std::string> history,
                                        std::span<const std::string> candidates) {
  if (candidates.empty()) throw InvalidArgument("empty candidate set");
  auto out = DoStep(ctx, history, candidates);
  if (out.size() != candidates.size()) {
    throw ScorerError(fmt::format("scorer returned {} step scores for {} candidates",
                                  out.size(), candidates.size()),
                      false);
  }
  return out;
}

}  // namespace asrec

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

#include <string>
#include <vector>

#include "asrec/scorer.h"

namespace asrec {

// Deterministic stand-in for the correction model: a character bigram model
// estimated from the context alone. Each kSep-separated context segment is
// wrapped in a boundary symbol and its bigrams counted; then
//   P(c | p) = (count(p, c) + 1) / (count(p, *) + V)
// with V = |segment alphabet| + 1 (the boundary symbol). Characters outside
// the alphabet just get the add-one numerator. A candidate is scored as its
// single-space-joined tokens framed by the boundary symbol.
// Stateless: every call rebuilds the model from the context.
class ToyScorer final : public Scorer {
 public:
  ScorerInfo Info() override { return {"toy-char-bigram", "whitespace"}; }

 protected:
  std::vector<double> DoScore(const ScorerContext& ctx,
                              std::span<const std::string> candidates) override;
  std::vector<double> DoStep(const ScorerContext& ctx,
                             std::span<const std::string> history,
                             std::span<const std::string> candidates) override;
  std::string DoGenerate(const ScorerContext& ctx) override;
};

// Context segments the toy model is estimated from.
std::vector<std::string> SplitContext(std::string_view context);

}  // namespace asrec

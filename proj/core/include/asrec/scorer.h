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
#include <string_view>
#include <vector>

#include "asrec/types.h"

namespace asrec {

// Step candidate that asks for the end-of-sequence probability.
inline constexpr std::string_view kEndOfSequence = "</s>";

// What the correction model conditions on: the top-n hypotheses joined
// with kSep.
struct ScorerContext {
  std::string text;
  int n_input = 1;

  static ScorerContext FromNBest(const NBestList& nbest, int n);
};

struct ScorerInfo {
  std::string name;
  std::string tokenizer;
};

// The error-correction language model. Sequences are whitespace-separated
// token strings; a sequence score includes the end-of-sequence term, so for
// every backend
//   ScoreSequence(ctx, "t1 ... tk") ==
//     sum_i DecoderStep(ctx, {t1..t(i-1)}, {ti}) + DecoderStep(ctx, {t1..tk}, {"</s>"})
// within 1e-6. All values are natural logs.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual ScorerInfo Info() = 0;

  // Throws InvalidArgument on an empty candidate.
  double ScoreSequence(const ScorerContext& ctx, std::string_view candidate);
  // One batched request; result[i] belongs to candidates[i].
  std::vector<double> ScoreSequences(const ScorerContext& ctx,
                                     std::span<const std::string> candidates);
  // log P(candidate | ctx, history) for each candidate token. Throws
  // InvalidArgument on an empty candidate set.
  std::vector<double> DecoderStep(const ScorerContext& ctx,
                                  std::span<const std::string> history,
                                  std::span<const std::string> candidates);
  // Free-running output (the backend's own unconstrained decode).
  std::string Generate(const ScorerContext& ctx) { return DoGenerate(ctx); }

 protected:
  virtual std::vector<double> DoScore(const ScorerContext& ctx,
                                      std::span<const std::string> candidates) = 0;
  virtual std::vector<double> DoStep(const ScorerContext& ctx,
                                     std::span<const std::string> history,
                                     std::span<const std::string> candidates) = 0;
  virtual std::string DoGenerate(const ScorerContext& ctx) = 0;
};

}  // namespace asrec

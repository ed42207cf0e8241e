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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asrec/lattice.h"
#include "asrec/scorer.h"
#include "asrec/tokenizer.h"
#include "asrec/types.h"

namespace asrec {

enum class Strategy { kUncon, kConstr, kClosest, kLattice };

Strategy ParseStrategy(std::string_view name);
std::string_view StrategyName(Strategy s);

inline constexpr std::string_view kFlagTruncation = "suspected-truncation";

struct UnconResult {
  std::string text;
  std::vector<std::string> flags;
};

// Removes surrounding whitespace, matching quote pairs and one enclosing
// <tag>...</tag> pair, repeatedly.
std::string StripWrapping(std::string_view text);

// Free generation from the scorer conditioned on the top n_input hypotheses.
// Flags (never alters) outputs with fewer than half the words of the rank-1
// hypothesis. Throws InvalidArgument when n_input exceeds the list size.
UnconResult CorrectUnconstrained(const Utterance& utt, Scorer& scorer,
                                 const EcConfig& cfg);

struct ConstrainedResult {
  Hypothesis hypothesis;
  double score = 0.0;
  std::vector<double> ec_scores;  // per candidate, rank order; empty if lambda == 0
};

// (1 - lambda) * asr + lambda * ec over candidates; ties go to the lowest rank.
size_t InterpolatedArgmax(std::span<const Hypothesis> candidates,
                          std::span<const double> ec_scores, double lambda);

// Picks among the top n_input hypotheses. With lambda == 0 the scorer is
// not consulted.
ConstrainedResult SelectConstrained(const Utterance& utt, Scorer& scorer,
                                    const EcConfig& cfg);

struct ClosestResult {
  Hypothesis hypothesis;
  int64_t distance = 0;
  std::vector<int64_t> distances;  // rank order
};

// Hypothesis among the top n at the smallest word-level Levenshtein
// distance (after NormalizeEval) from `uncon_output`; ties to the lowest rank.
ClosestResult ClosestMap(std::string_view uncon_output, const NBestList& nbest, int n);

struct LatticeResult {
  std::vector<std::string> tokens;
  double score = 0.0;
  int64_t decoder_calls = 0;
};

// Beam search restricted to lattice paths. Nodes are visited in topological
// order; each node keeps at most beam_width partial hypotheses. A partial
// hypothesis h at node v is extended along every edge v->x with
//   lambda * log P(x | history(h) + v) + (1 - lambda) * score(v->x)
// where the correction-model term comes from one DecoderStep call per h
// (the end node is scored as kEndOfSequence). A full beam evicts its lowest
// item, the most recently inserted one among equal scores, only for a
// strictly better newcomer. The best item at the end node wins; equal
// scores go to the lexicographically smaller token sequence.
LatticeResult LatticeDecode(const Lattice& lattice, Scorer& scorer,
                            const ScorerContext& ctx, const EcConfig& cfg);

// Evenly spaced values lo, lo + step, ..., hi (inclusive, step count rounded).
std::vector<double> LambdaGrid(double lo = 0.0, double hi = 1.0, double step = 0.05);

struct GridPoint {
  double lambda = 0.0;
  double wer_percent = 0.0;
};

struct GridResult {
  double best_lambda = 0.0;
  double best_wer = 0.0;
  std::vector<GridPoint> curve;
};

struct GridOptions {
  double lo = 0.0;
  double hi = 1.0;
  double step = 0.05;
  // Lattice tokens are turned back into words with this convention.
  MarkerConvention markers = MarkerConvention::kNone;
};

// Tunes lambda for kConstr or kLattice by corpus WER on `dev`; ties go to
// the smaller lambda. Utterances without a lattice use LatticeFromNBest over
// their top n_input hypotheses. Throws InvalidArgument on an empty dev set
// or another strategy.
GridResult GridSearchLambda(std::span<const Utterance> dev, Scorer& scorer,
                            Strategy strategy, const EcConfig& base,
                            const GridOptions& options = {});

// Lattice of `utt` (or one built from its top n hypotheses).
Lattice DecodingLattice(const Utterance& utt, int n);

}  // namespace asrec

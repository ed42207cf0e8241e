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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asrec/types.h"

namespace asrec {

struct AlignmentCounts {
  int64_t cor = 0;
  int64_t sub = 0;
  int64_t del = 0;
  int64_t ins = 0;
  int64_t ref_len = 0;

  int64_t errors() const { return sub + del + ins; }
  // Fraction, not percent. Empty when ref_len == 0.
  std::optional<double> wer() const;

  AlignmentCounts& operator+=(const AlignmentCounts& o);
  friend AlignmentCounts operator+(AlignmentCounts a, const AlignmentCounts& b) {
    return a += b;
  }
  friend bool operator==(const AlignmentCounts&, const AlignmentCounts&) = default;
};

enum class EditOp : uint8_t { kCorrect, kSubstitution, kDeletion, kInsertion };

// ref_index / hyp_index are -1 where the op consumes no token on that side.
struct AlignStep {
  EditOp op;
  int ref_index;
  int hyp_index;
};

struct Alignment {
  AlignmentCounts counts;
  std::vector<AlignStep> path;  // in ref/hyp order
};

// Minimum-edit (Levenshtein) alignment of two token sequences. Among equal
// cost alignments the backtrace prefers, at every cell, the diagonal
// (match/substitution), then deletion, then insertion.
Alignment Align(std::span<const std::string> ref, std::span<const std::string> hyp);

// Word-level Levenshtein distance.
int64_t EditDistance(std::span<const std::string> a, std::span<const std::string> b);

struct UtteranceScore {
  std::string id;
  AlignmentCounts counts;
  int selected_rank = 0;  // oracle selection; 0 when not applicable
};

struct CorpusReport {
  AlignmentCounts totals;
  double wer_percent = 0.0;  // from summed counts; 0 when no reference words
  std::vector<UtteranceScore> utterances;
};

// Corpus WER of `texts[i]` against `utterances[i].reference`; both sides are
// passed through NormalizeEval. Throws InvalidArgument on arity mismatch and
// DataError naming the utterance when a reference is missing.
CorpusReport CorpusWer(std::span<const Utterance> utterances,
                       std::span<const std::string> texts);

// Per utterance, picks among the top n hypotheses the one with fewest edit
// errors (ties to the lowest rank). n larger than a list uses the full list.
CorpusReport OracleWer(std::span<const Utterance> utterances, int n);

struct CrossWer {
  AlignmentCounts counts;  // summed over ordered pairs of unique hypotheses
  int unique = 0;

  double all_pct() const;
  double sub_pct() const;
  double del_pct() const;
  double ins_pct() const;
  // "All / Sub / Del / Ins" with one decimal, e.g. "12.9 / 7.5 / 2.7 / 2.7".
  std::string FormatRow() const;

  CrossWer& operator+=(const CrossWer& o);
};

// Pairwise WER among the unique NormalizeStats texts of one list, over every
// ordered pair (i as reference, j as hypothesis), i != j.
CrossWer ListCrossWer(const NBestList& nbest);
CrossWer CorpusCrossWer(std::span<const NBestList> lists);

// Mean number of distinct NormalizeStats texts per list.
double Uniq(std::span<const NBestList> lists);

// Relative WER reduction in percent. Throws InvalidArgument unless
// baseline_wer > 0.
double Werr(double baseline_wer, double system_wer);

// Rounds half away from zero to `decimals` places.
double RoundHalfAway(double value, int decimals);

}  // namespace asrec

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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asrec/lattice.h"

namespace asrec {

inline constexpr std::string_view kSep = "[SEP]";

struct Hypothesis {
  std::string text;
  double asr_logscore = 0.0;  // natural log
  int rank = 1;
  // System tag for hypotheses pooled from several recognizers ("E", "T"...).
  std::string source;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

// Ranked ASR hypotheses. Ranks are 1..N in storage order. When scores are
// comparable (single system) the list is also sorted by descending score;
// pooled multi-system lists keep their construction order instead.
class NBestList {
 public:
  // Stable-sorts by descending score and renumbers ranks. `reordered` is set
  // when the input order disagreed with the score order.
  static NBestList FromUnsorted(std::vector<Hypothesis> hyps,
                                bool* reordered = nullptr);

  // Keeps the given order and renumbers ranks. With `scores_comparable`,
  // throws InvalidArgument unless scores are non-increasing.
  static NBestList FromOrdered(std::vector<Hypothesis> hyps,
                               bool scores_comparable = true);

  size_t size() const { return hyps_.size(); }
  const Hypothesis& operator[](size_t i) const { return hyps_[i]; }
  const Hypothesis& at_rank(int rank) const;
  std::span<const Hypothesis> hypotheses() const { return hyps_; }
  // First n hypotheses; throws InvalidArgument unless 1 <= n <= size().
  std::span<const Hypothesis> top(int n) const;
  auto begin() const { return hyps_.begin(); }
  auto end() const { return hyps_.end(); }

  bool scores_comparable() const { return scores_comparable_; }

  friend bool operator==(const NBestList&, const NBestList&) = default;

 private:
  NBestList(std::vector<Hypothesis> hyps, bool comparable)
      : hyps_(std::move(hyps)), scores_comparable_(comparable) {}

  std::vector<Hypothesis> hyps_;
  bool scores_comparable_ = true;
};

struct Utterance {
  std::string id;
  std::optional<std::string> reference;
  NBestList nbest;
  std::optional<Lattice> lattice;
};

struct EcConfig {
  double lambda = 0.5;  // weight on the correction model score
  int beam_width = 1;
  int n_input = 5;
  // Divide the correction model's sequence score by its token count.
  bool length_normalize = false;

  void Validate() const;
};

// Joins the texts of the first n hypotheses with `sep`.
std::string SepConcat(const NBestList& nbest, int n,
                      std::string_view sep = kSep);

// Whitespace tokenization; no normalization.
std::vector<std::string> SplitWords(std::string_view text);
std::string JoinWords(std::span<const std::string> words);

}  // namespace asrec

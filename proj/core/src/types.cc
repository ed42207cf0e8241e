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

#include "asrec/types.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "asrec/error.h"

namespace asrec {

namespace {

void Renumber(std::vector<Hypothesis>& hyps) {
  for (size_t i = 0; i < hyps.size(); ++i) hyps[i].rank = static_cast<int>(i) + 1;
}

void CheckScores(const std::vector<Hypothesis>& hyps) {
  if (hyps.empty()) throw InvalidArgument("an N-best list needs N >= 1");
  for (const auto& h : hyps) {
    if (std::isnan(h.asr_logscore)) {
      throw InvalidArgument(fmt::format("NaN ASR score for '{}'", h.text));
    }
  }
}

}  // namespace

NBestList NBestList::FromUnsorted(std::vector<Hypothesis> hyps,
                                  bool* reordered) {
  CheckScores(hyps);
  const bool sorted = std::is_sorted(
      hyps.begin(), hyps.end(),
      [](const auto& a, const auto& b) { return a.asr_logscore > b.asr_logscore; });
  if (!sorted) {
    std::stable_sort(hyps.begin(), hyps.end(), [](const auto& a, const auto& b) {
      return a.asr_logscore > b.asr_logscore;
    });
  }
  if (reordered) *reordered = !sorted;
  Renumber(hyps);
  return NBestList(std::move(hyps), true);
}

NBestList NBestList::FromOrdered(std::vector<Hypothesis> hyps,
                                 bool scores_comparable) {
  CheckScores(hyps);
  if (scores_comparable) {
    for (size_t i = 1; i < hyps.size(); ++i) {
      if (hyps[i].asr_logscore > hyps[i - 1].asr_logscore) {
        throw InvalidArgument(fmt::format(
            "hypothesis {} scores above hypothesis {}", i + 1, i));
      }
    }
  }
  Renumber(hyps);
  return NBestList(std::move(hyps), scores_comparable);
}

const Hypothesis& NBestList::at_rank(int rank) const {
  if (rank < 1 || static_cast<size_t>(rank) > hyps_.size()) {
    throw InvalidArgument(
        fmt::format("rank {} outside 1..{}", rank, hyps_.size()));
  }
  return hyps_[rank - 1];
}

std::span<const Hypothesis> NBestList::top(int n) const {
  if (n < 1 || static_cast<size_t>(n) > hyps_.size()) {
    throw InvalidArgument(fmt::format(
        "requested top {} of a {}-best list", n, hyps_.size()));
  }
  return std::span<const Hypothesis>(hyps_).first(static_cast<size_t>(n));
}

void EcConfig::Validate() const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InvalidArgument(fmt::format("lambda {} outside [0, 1]", lambda));
  }
  if (beam_width < 1) {
    throw InvalidArgument(fmt::format("beam width {} < 1", beam_width));
  }
  if (n_input < 1) throw InvalidArgument(fmt::format("n_input {} < 1", n_input));
}

std::string SepConcat(const NBestList& nbest, int n, std::string_view sep) {
  std::string out;
  for (const auto& h : nbest.top(n)) {
    if (!out.empty() || h.rank > 1) out += sep;
    out += h.text;
  }
  return out;
}

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> words;
  size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) words.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return words;
}

std::string JoinWords(std::span<const std::string> words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace asrec

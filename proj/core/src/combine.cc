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

#include "asrec/combine.h"

#include <algorithm>
#include <cctype>
#include <set>

#include <fmt/format.h>

#include "asrec/error.h"

namespace asrec {

WordTransitionNetwork::WordTransitionNetwork(std::span<const std::string> words,
                                             double weight) {
  for (const auto& w : words) slots_.push_back({{WtnArc{w, 0, weight}}});
  weights_.push_back(weight);
  systems_ = 1;
}

void WordTransitionNetwork::Add(std::span<const std::string> words, double weight) {
  const int sys = systems_++;
  weights_.push_back(weight);
  const size_t m = slots_.size();
  const size_t n = words.size();
  auto holds = [&](size_t slot, const std::string& w) {
    return std::any_of(slots_[slot].arcs.begin(), slots_[slot].arcs.end(),
                       [&](const WtnArc& a) { return a.word && *a.word == w; });
  };

  const size_t width = n + 1;
  std::vector<int> cost((m + 1) * width);
  for (size_t j = 0; j <= n; ++j) cost[j] = static_cast<int>(j);
  for (size_t i = 1; i <= m; ++i) {
    cost[i * width] = static_cast<int>(i);
    for (size_t j = 1; j <= n; ++j) {
      const int diag = cost[(i - 1) * width + j - 1] + (holds(i - 1, words[j - 1]) ? 0 : 1);
      const int del = cost[(i - 1) * width + j] + 1;
      const int ins = cost[i * width + j - 1] + 1;
      cost[i * width + j] = std::min({diag, del, ins});
    }
  }

  // Backtrace into (slot index or -1 for a new slot, word or null) ops.
  struct Op {
    int slot;
    std::optional<std::string> word;
  };
  std::vector<Op> ops;
  size_t i = m, j = n;
  while (i > 0 || j > 0) {
    const int here = cost[i * width + j];
    if (i > 0 && j > 0 &&
        cost[(i - 1) * width + j - 1] + (holds(i - 1, words[j - 1]) ? 0 : 1) == here) {
      ops.push_back({static_cast<int>(i - 1), words[j - 1]});
      --i;
      --j;
    } else if (i > 0 && cost[(i - 1) * width + j] + 1 == here) {
      ops.push_back({static_cast<int>(i - 1), std::nullopt});
      --i;
    } else {
      ops.push_back({-1, words[j - 1]});
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());

  std::vector<WtnSlot> merged;
  merged.reserve(m + n);
  for (auto& op : ops) {
    if (op.slot >= 0) {
      WtnSlot s = std::move(slots_[static_cast<size_t>(op.slot)]);
      s.arcs.push_back({std::move(op.word), sys, weight});
      merged.push_back(std::move(s));
    } else {
      // New slot: earlier systems pass through it on null arcs.
      WtnSlot s;
      for (int k = 0; k < sys; ++k) {
        s.arcs.push_back({std::nullopt, k, weights_[static_cast<size_t>(k)]});
      }
      s.arcs.push_back({std::move(op.word), sys, weight});
      merged.push_back(std::move(s));
    }
  }
  slots_ = std::move(merged);
}

std::vector<std::string> WordTransitionNetwork::Vote() const {
  std::vector<std::string> out;
  for (const auto& slot : slots_) {
    // symbol -> (total weight, earliest system)
    std::map<std::optional<std::string>, std::pair<double, int>> tally;
    for (const auto& a : slot.arcs) {
      auto [it, inserted] = tally.emplace(a.word, std::pair{a.weight, a.system});
      if (!inserted) {
        it->second.first += a.weight;
        it->second.second = std::min(it->second.second, a.system);
      }
    }
    const std::optional<std::string>* winner = nullptr;
    std::pair<double, int> best{};
    for (const auto& [sym, v] : tally) {
      if (!winner || v.first > best.first ||
          (v.first == best.first && v.second < best.second)) {
        winner = &sym;
        best = v;
      }
    }
    if (winner && winner->has_value()) out.push_back(**winner);
  }
  return out;
}

std::string Rover(std::span<const SystemOutput> outputs) {
  if (outputs.empty()) throw InvalidArgument("ROVER needs at least one system");
  std::vector<SystemOutput> pooled;
  for (const auto& o : outputs) {
    if (!(o.weight > 0.0)) {
      throw InvalidArgument(fmt::format("system weight {} is not positive", o.weight));
    }
    auto it = std::find_if(pooled.begin(), pooled.end(), [&](const SystemOutput& p) {
      return SplitWords(p.text) == SplitWords(o.text);
    });
    if (it == pooled.end()) {
      pooled.push_back(o);
    } else {
      it->weight += o.weight;
    }
  }
  WordTransitionNetwork wtn(SplitWords(pooled.front().text), pooled.front().weight);
  for (size_t k = 1; k < pooled.size(); ++k) {
    wtn.Add(SplitWords(pooled[k].text), pooled[k].weight);
  }
  return JoinWords(wtn.Vote());
}

std::vector<std::pair<std::string, int>> ParseListPattern(std::string_view pattern) {
  std::vector<std::pair<std::string, int>> out;
  size_t i = 0;
  while (i < pattern.size()) {
    const size_t tag_start = i;
    while (i < pattern.size() && std::isupper(static_cast<unsigned char>(pattern[i]))) ++i;
    const size_t num_start = i;
    while (i < pattern.size() && std::isdigit(static_cast<unsigned char>(pattern[i]))) ++i;
    if (num_start == tag_start || i == num_start) {
      throw InvalidArgument(fmt::format(
          "bad list pattern '{}' at offset {} (expected e.g. E1E2T1)", pattern, tag_start));
    }
    const int rank = std::stoi(std::string(pattern.substr(num_start, i - num_start)));
    out.emplace_back(std::string(pattern.substr(tag_start, num_start - tag_start)), rank);
  }
  if (out.empty()) throw InvalidArgument("empty list pattern");
  return out;
}

NBestList BuildMultiNBest(const std::map<std::string, const NBestList*>& sources,
                          std::string_view pattern) {
  std::vector<Hypothesis> hyps;
  std::set<std::string> used;
  for (const auto& [tag, rank] : ParseListPattern(pattern)) {
    auto it = sources.find(tag);
    if (it == sources.end() || it->second == nullptr) {
      throw InvalidArgument(fmt::format("pattern names unknown source '{}'", tag));
    }
    const NBestList& list = *it->second;
    if (rank < 1 || static_cast<size_t>(rank) > list.size()) {
      throw InvalidArgument(fmt::format("{}{} requested from a {}-best list", tag,
                                        rank, list.size()));
    }
    Hypothesis h = list.at_rank(rank);
    h.source = tag;
    hyps.push_back(std::move(h));
    used.insert(tag);
  }
  const bool comparable = used.size() == 1;
  if (comparable) {
    // A single-source pattern may still reorder ranks.
    for (size_t k = 1; k < hyps.size(); ++k) {
      if (hyps[k].asr_logscore > hyps[k - 1].asr_logscore) {
        return NBestList::FromOrdered(std::move(hyps), false);
      }
    }
  }
  return NBestList::FromOrdered(std::move(hyps), comparable);
}

}  // namespace asrec

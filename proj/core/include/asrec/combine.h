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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asrec/types.h"

namespace asrec {

struct SystemOutput {
  std::string text;
  double weight = 1.0;
};

// One arc of a slot; an empty `word` is the null arc.
struct WtnArc {
  std::optional<std::string> word;
  int system = 0;  // index into the pooled system list
  double weight = 0.0;
};

struct WtnSlot {
  std::vector<WtnArc> arcs;
};

// Slot-aligned word transition network: system s contributes exactly one
// arc to every slot.
class WordTransitionNetwork {
 public:
  // Seeds the network with the first system.
  WordTransitionNetwork(std::span<const std::string> words, double weight);

  // Aligns `words` against the slots by minimum edit cost (a word matches a
  // slot holding it for free, otherwise substitution, deletion or insertion
  // each cost 1). Backtrace prefers match, then substitution, then null.
  void Add(std::span<const std::string> words, double weight);

  // Highest total weight per slot; vote ties go to the symbol of the
  // earliest system; a winning null arc emits nothing.
  std::vector<std::string> Vote() const;

  const std::vector<WtnSlot>& slots() const { return slots_; }
  int num_systems() const { return systems_; }

 private:
  std::vector<WtnSlot> slots_;
  std::vector<double> weights_;
  int systems_ = 0;
};

// ROVER-style combination. Identical texts are pooled first (weights summed,
// position of first occurrence kept), then the pooled outputs are aligned
// into a network in the given order and voted. Throws InvalidArgument on an
// empty input or a non-positive weight.
std::string Rover(std::span<const SystemOutput> outputs);

// Pattern like "E1E2T1T2T3": (uppercase tag, 1-based rank) pairs.
std::vector<std::pair<std::string, int>> ParseListPattern(std::string_view pattern);

// Builds a list in pattern order from the tagged source lists. Ranks are
// renumbered, texts and scores copied verbatim, and each hypothesis carries
// its source tag. Lists drawing on more than one source are marked as having
// non-comparable scores. Throws InvalidArgument on an unknown tag or a rank
// the source list does not have.
NBestList BuildMultiNBest(const std::map<std::string, const NBestList*>& sources,
                          std::string_view pattern);

}  // namespace asrec

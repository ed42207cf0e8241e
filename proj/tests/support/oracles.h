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
#include <string>
#include <vector>

#include "asrec/lattice.h"
#include "asrec/scorer.h"

// Reference implementations written from the definitions, deliberately
// sharing no code with the library they check.
namespace asrec::testing {

// Levenshtein distance by the textbook recursion (memoised).
int64_t RecursiveEditDistance(const std::vector<std::string>& a,
                              const std::vector<std::string>& b);

struct EnumeratedPath {
  std::vector<int> nodes;
  std::vector<std::string> tokens;  // sentinels excluded
  double edge_sum = 0.0;
};

// Every start-to-end path by depth-first search. Aborts the test process if
// there are more than `limit` paths.
std::vector<EnumeratedPath> EnumeratePaths(const Lattice& lattice, size_t limit = 100000);

// Set of space-joined token strings over all paths.
std::vector<std::string> PathStrings(const Lattice& lattice);

struct BruteForceBest {
  std::vector<std::string> tokens;
  double score = 0.0;
};

// argmax over paths of lambda * ScoreSequence + (1 - lambda) * edge sum;
// equal scores go to the lexicographically smaller token sequence.
// Paths with no tokens score only their edges.
BruteForceBest BruteForceLatticeArgmax(const Lattice& lattice, Scorer& scorer,
                                       const ScorerContext& ctx, double lambda);

// Character bigram written out directly from the toy model definition,
// used to pin the library's toy scorer.
double ToyReferenceLogProb(const std::string& context, const std::string& candidate);

}  // namespace asrec::testing

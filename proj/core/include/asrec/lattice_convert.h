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

#include "asrec/lattice.h"
#include "asrec/metrics.h"
#include "asrec/tokenizer.h"
#include "asrec/types.h"

namespace asrec {

// Collapses every run of subword pieces that spells one word into a single
// word-labelled node. A word node covers the edge entering its first piece
// and the edges between its pieces; its score is their sum. When several
// piece paths spell the same word between the same boundary nodes, the best
// (maximum) score is kept. Throws LatticeError on a piece that continues
// into the end node or on an empty word.
Lattice WordLatticeFromSubword(const Lattice& subword, MarkerConvention c);

// Expands each word node into a chain of pieces from `tok`. The first piece
// keeps the word's node id and inherits its incoming edges; chain-internal
// edges score 0. Throws LatticeError if the tokenizer does not round-trip a
// word.
Lattice RetokenizeLattice(const Lattice& words, const TokenizerAdapter& tok);

// Word lattice holding exactly the hypotheses of `nbest` (whitespace tokens).
// Built as a prefix trie whose edge scores are pushed towards the start: the
// edge entering a trie node carries the gain of that subtree's best
// hypothesis over its parent's, so the first edge holds the subtree maximum
// and every hypothesis path sums to its own ASR score. Nodes with the same
// token and identical scored continuations are then merged.
// Throws InvalidArgument on an empty hypothesis.
Lattice LatticeFromNBest(const NBestList& nbest);

// Merges non-sentinel nodes that have the same token and identical outgoing
// (target, score) sets. Preserves every path string; parallel edges that
// become duplicates keep the maximum score.
Lattice MergeEquivalentSuffixes(const Lattice& lattice);

// Fewest edit errors between `ref` and any start-to-end path, by dynamic
// programming over (node, reference position). No path enumeration.
AlignmentCounts LatticeOracle(const Lattice& lattice,
                              std::span<const std::string> ref);

}  // namespace asrec

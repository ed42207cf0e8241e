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

#include "asrec/lattice_convert.h"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include <fmt/format.h>

#include "asrec/error.h"

namespace asrec {

namespace {

struct WordKey {
  int source;  // last piece of the previous word, or the start node
  int last;    // last piece of this word
  std::string word;

  auto operator<=>(const WordKey&) const = default;
};

bool IsBoundary(const Lattice& lat, int u, int x, MarkerConvention c) {
  if (u == lat.start()) return true;
  if (x == lat.end()) {
    if (ContinuesWord(lat.token(u), c)) {
      throw LatticeError(fmt::format(
          "piece '{}' (node {}) continues into the end node", lat.token(u), u));
    }
    return true;
  }
  switch (c) {
    case MarkerConvention::kNone: return true;
    case MarkerConvention::kContinuationSuffix: return !ContinuesWord(lat.token(u), c);
    case MarkerConvention::kWordStartPrefix: return StartsWord(lat.token(x), c);
  }
  return true;
}

void KeepMax(std::map<std::pair<int, int>, double>& edges, int from, int to,
             double score) {
  auto [it, inserted] = edges.emplace(std::pair{from, to}, score);
  if (!inserted) it->second = std::max(it->second, score);
}

Lattice Build(std::vector<LatticeNode> nodes,
              const std::map<std::pair<int, int>, double>& edges, int start,
              int end) {
  std::vector<LatticeEdge> out;
  out.reserve(edges.size());
  for (const auto& [k, s] : edges) out.push_back({k.first, k.second, s});
  return Lattice(std::move(nodes), std::move(out), start, end);
}

}  // namespace

Lattice WordLatticeFromSubword(const Lattice& sub, MarkerConvention c) {
  std::unordered_map<int, size_t> topo_pos;
  for (size_t i = 0; i < sub.topological_order().size(); ++i) {
    topo_pos[sub.topological_order()[i]] = i;
  }

  std::map<WordKey, double> words;
  std::set<int> expanded;
  std::vector<int> pending{sub.start()};
  std::map<std::pair<int, int>, double> direct;  // start -> end, no words

  while (!pending.empty()) {
    const int source = pending.back();
    pending.pop_back();
    if (!expanded.insert(source).second) continue;

    // Partial words reachable from `source`, keyed by topological position
    // so each state is final when popped.
    std::map<std::tuple<size_t, int, std::string>, double> frontier;
    auto push = [&](int node, std::string partial, double score) {
      auto [it, inserted] =
          frontier.emplace(std::tuple{topo_pos.at(node), node, std::move(partial)}, score);
      if (!inserted) it->second = std::max(it->second, score);
    };
    for (const auto& e : sub.out_edges(source)) {
      if (!IsBoundary(sub, source, e.to, c)) continue;
      if (e.to == sub.end()) {
        if (source == sub.start()) direct[{source, e.to}] = e.score;
        continue;
      }
      push(e.to, std::string(StripMarker(sub.token(e.to), c)), e.score);
    }
    while (!frontier.empty()) {
      auto node_handle = frontier.extract(frontier.begin());
      const auto& [pos, node, partial] = node_handle.key();
      const double score = node_handle.mapped();
      bool completes = false;
      for (const auto& e : sub.out_edges(node)) {
        if (IsBoundary(sub, node, e.to, c)) {
          completes = true;
        } else {
          push(e.to, partial + std::string(StripMarker(sub.token(e.to), c)),
               score + e.score);
        }
      }
      if (!completes) continue;
      if (partial.empty()) {
        throw LatticeError(fmt::format("empty word ending at node {}", node));
      }
      auto [it, inserted] = words.emplace(WordKey{source, node, partial}, score);
      if (!inserted) it->second = std::max(it->second, score);
      pending.push_back(node);
    }
  }

  // Word nodes get ids 1..K in key order; start is 0 and end K+1.
  const int start = 0;
  const int end = static_cast<int>(words.size()) + 1;
  std::vector<LatticeNode> nodes{{start, std::string(kEpsilon)}};
  std::map<WordKey, int> ids;
  std::multimap<int, int> by_last;  // last piece -> word node id
  for (const auto& [key, score] : words) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back({id, key.word});
    ids.emplace(key, id);
    by_last.emplace(key.last, id);
  }
  nodes.push_back({end, std::string(kEpsilon)});

  std::map<std::pair<int, int>, double> edges;
  for (const auto& [k, s] : direct) KeepMax(edges, start, end, s);
  for (const auto& [key, score] : words) {
    const int id = ids.at(key);
    if (key.source == sub.start()) {
      KeepMax(edges, start, id, score);
    } else {
      auto [lo, hi] = by_last.equal_range(key.source);
      for (auto it = lo; it != hi; ++it) KeepMax(edges, it->second, id, score);
    }
    for (const auto& e : sub.out_edges(key.last)) {
      if (e.to == sub.end()) KeepMax(edges, id, end, e.score);
    }
  }
  return MergeEquivalentSuffixes(Build(std::move(nodes), edges, start, end));
}

Lattice RetokenizeLattice(const Lattice& words, const TokenizerAdapter& tok) {
  const MarkerConvention c = tok.convention();
  std::vector<LatticeNode> nodes;
  std::unordered_map<int, int> last_piece;
  std::map<std::pair<int, int>, double> edges;
  int next_id = words.max_node_id() + 1;

  for (const auto& n : words.nodes()) {
    if (words.is_sentinel(n.id)) {
      nodes.push_back(n);
      last_piece[n.id] = n.id;
      continue;
    }
    const auto pieces = tok.Segment(n.token);
    std::vector<std::string> back;
    try {
      back = PiecesToWords(pieces, c);
    } catch (const LatticeError&) {
      back.clear();
    }
    if (pieces.empty() || back.size() != 1 || back.front() != n.token) {
      throw LatticeError(fmt::format("tokenizer {} does not round-trip '{}'",
                                     tok.name(), n.token));
    }
    int prev = n.id;
    nodes.push_back({n.id, pieces.front()});
    for (size_t k = 1; k < pieces.size(); ++k) {
      const int id = next_id++;
      nodes.push_back({id, pieces[k]});
      edges[{prev, id}] = 0.0;
      prev = id;
    }
    last_piece[n.id] = prev;
  }
  for (const auto& e : words.edges()) {
    edges[{last_piece.at(e.from), e.to}] = e.score;
  }
  return Build(std::move(nodes), edges, words.start(), words.end());
}

Lattice LatticeFromNBest(const NBestList& nbest) {
  struct TrieNode {
    std::string token;
    int parent = -1;
    double best = -std::numeric_limits<double>::infinity();
    double final_score = -std::numeric_limits<double>::infinity();
    std::map<std::string, int> children;
  };
  std::vector<TrieNode> trie(1);
  trie[0].token = kEpsilon;
  trie[0].parent = -1;
  for (const auto& h : nbest) {
    const auto tokens = SplitWords(h.text);
    if (tokens.empty()) {
      throw InvalidArgument(
          fmt::format("hypothesis {} has empty text", h.rank));
    }
    int cur = 0;
    trie[0].best = std::max(trie[0].best, h.asr_logscore);
    for (const auto& t : tokens) {
      auto it = trie[cur].children.find(t);
      int next;
      if (it == trie[cur].children.end()) {
        next = static_cast<int>(trie.size());
        trie[cur].children.emplace(t, next);
        trie.emplace_back();
        trie.back().token = t;
        trie.back().parent = cur;
      } else {
        next = it->second;
      }
      cur = next;
      trie[cur].best = std::max(trie[cur].best, h.asr_logscore);
    }
    trie[cur].final_score = std::max(trie[cur].final_score, h.asr_logscore);
  }

  const int end = static_cast<int>(trie.size());
  std::vector<LatticeNode> nodes;
  std::map<std::pair<int, int>, double> edges;
  for (int id = 0; id < end; ++id) {
    const auto& t = trie[id];
    nodes.push_back({id, t.token});
    if (id != 0) {
      const double base = t.parent == 0 ? 0.0 : trie[t.parent].best;
      edges[{t.parent, id}] = t.best - base;
    }
    if (t.final_score > -std::numeric_limits<double>::infinity()) {
      edges[{id, end}] = t.final_score - t.best;
    }
  }
  nodes.push_back({end, std::string(kEpsilon)});
  return MergeEquivalentSuffixes(Build(std::move(nodes), edges, 0, end));
}

Lattice MergeEquivalentSuffixes(const Lattice& lattice) {
  using Signature = std::pair<std::string, std::vector<std::pair<int, double>>>;
  std::unordered_map<int, int> rep;
  std::map<Signature, int> seen;
  const auto& order = lattice.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (lattice.is_sentinel(v)) {
      rep[v] = v;
      continue;
    }
    Signature sig{lattice.token(v), {}};
    for (const auto& e : lattice.out_edges(v)) {
      sig.second.emplace_back(rep.at(e.to), e.score);
    }
    std::sort(sig.second.begin(), sig.second.end());
    rep[v] = seen.emplace(std::move(sig), v).first->second;
  }

  std::vector<LatticeNode> nodes;
  for (const auto& n : lattice.nodes()) {
    if (rep.at(n.id) == n.id) nodes.push_back(n);
  }
  std::map<std::pair<int, int>, double> edges;
  for (const auto& e : lattice.edges()) {
    KeepMax(edges, rep.at(e.from), rep.at(e.to), e.score);
  }
  return Build(std::move(nodes), edges, lattice.start(), lattice.end());
}

AlignmentCounts LatticeOracle(const Lattice& lattice,
                              std::span<const std::string> ref) {
  struct Cell {
    int64_t errors = std::numeric_limits<int64_t>::max();
    AlignmentCounts counts;
  };
  auto better = [](const Cell& a, const Cell& b) {
    return std::tie(a.errors, a.counts.ins, a.counts.del) <
           std::tie(b.errors, b.counts.ins, b.counts.del);
  };
  auto relax = [&](Cell& dst, const Cell& src, int cor, int sub, int del, int ins) {
    if (src.errors == std::numeric_limits<int64_t>::max()) return;
    Cell cand = src;
    cand.counts.cor += cor;
    cand.counts.sub += sub;
    cand.counts.del += del;
    cand.counts.ins += ins;
    cand.errors += sub + del + ins;
    if (better(cand, dst)) dst = cand;
  };

  const size_t m = ref.size();
  std::unordered_map<int, std::vector<Cell>> table;
  for (int v : lattice.topological_order()) {
    auto& row = table[v];
    row.assign(m + 1, Cell{});
    if (v == lattice.start()) {
      row[0] = Cell{0, {}};
    } else {
      const bool epsilon = lattice.is_sentinel(v);
      const std::string& tok = lattice.token(v);
      for (const auto& e : lattice.in_edges(v)) {
        const auto& prev = table.at(e.from);
        for (size_t j = 0; j <= m; ++j) {
          if (epsilon) {
            relax(row[j], prev[j], 0, 0, 0, 0);
            continue;
          }
          relax(row[j], prev[j], 0, 0, 0, 1);
          if (j > 0) {
            const bool same = tok == ref[j - 1];
            relax(row[j], prev[j - 1], same ? 1 : 0, same ? 0 : 1, 0, 0);
          }
        }
      }
    }
    for (size_t j = 1; j <= m; ++j) relax(row[j], row[j - 1], 0, 0, 1, 0);
  }
  AlignmentCounts out = table.at(lattice.end())[m].counts;
  out.ref_len = static_cast<int64_t>(m);
  return out;
}

}  // namespace asrec

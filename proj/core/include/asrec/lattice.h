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
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

namespace asrec {

// Token carried by the start and end sentinels.
inline constexpr std::string_view kEpsilon = "<eps>";

struct LatticeNode {
  int id = 0;
  std::string token;

  friend bool operator==(const LatticeNode&, const LatticeNode&) = default;
};

// Score is the natural-log transition score for entering `to` from `from`.
struct LatticeEdge {
  int from = 0;
  int to = 0;
  double score = 0.0;

  friend bool operator==(const LatticeEdge&, const LatticeEdge&) = default;
};

// Orders nodes so every edge points forward. Ties between ready nodes are
// broken by ascending node id. Throws LatticeError naming a back edge when
// the graph has a cycle.
std::vector<int> TopologicalSort(std::span<const LatticeNode> nodes,
                                 std::span<const LatticeEdge> edges);

// Node-labelled token DAG with scored edges and distinguished start/end
// sentinels. Immutable; the constructor validates:
//   - node ids unique, edge endpoints exist, no duplicate (from, to) pairs;
//   - start has no incoming and end no outgoing edges, sentinels carry
//     kEpsilon and no other node does;
//   - acyclic, every node reachable from start and co-reachable to end.
class Lattice {
 public:
  Lattice(std::vector<LatticeNode> nodes, std::vector<LatticeEdge> edges,
          int start, int end);

  int start() const { return start_; }
  int end() const { return end_; }
  size_t num_nodes() const { return nodes_.size(); }
  size_t num_edges() const { return edges_.size(); }

  // Nodes sorted by id.
  std::span<const LatticeNode> nodes() const { return nodes_; }
  // Edges sorted by (from, to).
  std::span<const LatticeEdge> edges() const { return edges_; }

  bool has_node(int id) const { return index_.contains(id); }
  const std::string& token(int id) const;
  bool is_sentinel(int id) const { return id == start_ || id == end_; }

  std::span<const LatticeEdge> out_edges(int id) const;
  // Incoming edges of `id`, sorted by source id.
  const std::vector<LatticeEdge>& in_edges(int id) const;

  const std::vector<int>& topological_order() const { return topo_; }

  int max_node_id() const { return nodes_.back().id; }

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.start_ == b.start_ && a.end_ == b.end_ && a.nodes_ == b.nodes_ &&
           a.edges_ == b.edges_;
  }

 private:
  size_t IndexOf(int id) const;

  std::vector<LatticeNode> nodes_;
  std::vector<LatticeEdge> edges_;
  int start_;
  int end_;
  std::unordered_map<int, size_t> index_;
  std::vector<size_t> out_offset_;  // CSR offsets into edges_, per node index
  std::vector<std::vector<LatticeEdge>> in_;
  std::vector<int> topo_;
};

// Lattice JSON:
//   {"nodes":[{"id":int,"token":str}...],
//    "edges":[{"from":int,"to":int,"score":float}...],
//    "start":int,"end":int}
// Sentinel tokens may be given as "" or "<eps>".
Lattice LatticeFromJson(const nlohmann::json& j);
nlohmann::json LatticeToJson(const Lattice& lattice);

// Number of start-to-end paths, saturating at `cap`.
size_t CountPaths(const Lattice& lattice, size_t cap = SIZE_MAX);

}  // namespace asrec

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

#include "asrec/lattice.h"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>

#include <fmt/format.h>

#include "asrec/error.h"

namespace asrec {

std::vector<int> TopologicalSort(std::span<const LatticeNode> nodes,
                                 std::span<const LatticeEdge> edges) {
  std::unordered_map<int, size_t> index;
  std::vector<int> ids;
  ids.reserve(nodes.size());
  for (const auto& n : nodes) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());
  for (size_t i = 0; i < ids.size(); ++i) {
    if (!index.emplace(ids[i], i).second) {
      throw LatticeError(fmt::format("duplicate node id {}", ids[i]));
    }
  }

  std::vector<std::vector<size_t>> succ(ids.size());
  std::vector<size_t> indegree(ids.size(), 0);
  for (const auto& e : edges) {
    auto f = index.find(e.from);
    auto t = index.find(e.to);
    if (f == index.end() || t == index.end()) {
      throw LatticeError(fmt::format("edge {}->{} references an unknown node",
                                     e.from, e.to));
    }
    if (e.from == e.to) {
      throw LatticeError(
          fmt::format("cycle detected: back edge {}->{}", e.from, e.to));
    }
    succ[f->second].push_back(t->second);
    ++indegree[t->second];
  }

  // Node indices follow id order, so a min-heap on index is a min-heap on id.
  std::priority_queue<size_t, std::vector<size_t>, std::greater<>> ready;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<int> order;
  order.reserve(ids.size());
  while (!ready.empty()) {
    const size_t v = ready.top();
    ready.pop();
    order.push_back(ids[v]);
    for (size_t w : succ[v]) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  if (order.size() == ids.size()) return order;

  // Every remaining node lies on or downstream of a cycle; walk predecessors
  // inside the remainder until a node repeats to find a concrete back edge.
  std::vector<std::vector<size_t>> pred(ids.size());
  for (size_t v = 0; v < ids.size(); ++v) {
    for (size_t w : succ[v]) {
      if (indegree[w] > 0 && indegree[v] > 0) pred[w].push_back(v);
    }
  }
  size_t cur = 0;
  while (indegree[cur] == 0) ++cur;
  std::vector<int> seen_at(ids.size(), -1);
  int step = 0;
  size_t prev = cur;
  while (seen_at[cur] < 0) {
    seen_at[cur] = step++;
    prev = cur;
    cur = pred[cur].front();
  }
  // cur -> prev closes the cycle.
  throw LatticeError(
      fmt::format("cycle detected: back edge {}->{}", ids[cur], ids[prev]));
}

Lattice::Lattice(std::vector<LatticeNode> nodes, std::vector<LatticeEdge> edges,
                 int start, int end)
    : nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      start_(start),
      end_(end) {
  if (nodes_.size() < 2) {
    throw LatticeError("lattice needs at least a start and an end node");
  }
  if (start_ == end_) throw LatticeError("start and end must differ");
  std::sort(nodes_.begin(), nodes_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i].id, i).second) {
      throw LatticeError(fmt::format("duplicate node id {}", nodes_[i].id));
    }
  }
  if (!index_.contains(start_) || !index_.contains(end_)) {
    throw LatticeError("start or end node missing");
  }
  for (auto& n : nodes_) {
    const bool sentinel = n.id == start_ || n.id == end_;
    if (sentinel) {
      if (!n.token.empty() && n.token != kEpsilon) {
        throw LatticeError(
            fmt::format("sentinel node {} must carry epsilon", n.id));
      }
      n.token = std::string(kEpsilon);
    } else if (n.token.empty() || n.token == kEpsilon) {
      throw LatticeError(
          fmt::format("interior node {} has an empty token", n.id));
    }
  }

  std::sort(edges_.begin(), edges_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  for (size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (!index_.contains(e.from) || !index_.contains(e.to)) {
      throw LatticeError(fmt::format("edge {}->{} references an unknown node",
                                     e.from, e.to));
    }
    if (i > 0 && edges_[i - 1].from == e.from && edges_[i - 1].to == e.to) {
      throw LatticeError(fmt::format("duplicate edge {}->{}", e.from, e.to));
    }
    if (e.to == start_) throw LatticeError("start node has an incoming edge");
    if (e.from == end_) throw LatticeError("end node has an outgoing edge");
  }

  topo_ = TopologicalSort(nodes_, edges_);

  out_offset_.assign(nodes_.size() + 1, 0);
  in_.resize(nodes_.size());
  for (const auto& e : edges_) {
    ++out_offset_[IndexOf(e.from) + 1];
    in_[IndexOf(e.to)].push_back(e);
  }
  for (size_t i = 0; i < nodes_.size(); ++i) {
    out_offset_[i + 1] += out_offset_[i];
  }

  std::vector<char> fwd(nodes_.size(), 0), bwd(nodes_.size(), 0);
  fwd[IndexOf(start_)] = 1;
  for (int id : topo_) {
    if (!fwd[IndexOf(id)]) continue;
    for (const auto& e : out_edges(id)) fwd[IndexOf(e.to)] = 1;
  }
  bwd[IndexOf(end_)] = 1;
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
    if (!bwd[IndexOf(*it)]) continue;
    for (const auto& e : in_edges(*it)) bwd[IndexOf(e.from)] = 1;
  }
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (!fwd[i]) {
      throw LatticeError(fmt::format("node {} is unreachable from start",
                                     nodes_[i].id));
    }
    if (!bwd[i]) {
      throw LatticeError(
          fmt::format("node {} cannot reach the end node", nodes_[i].id));
    }
  }
}

size_t Lattice::IndexOf(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw InvalidArgument(fmt::format("no lattice node with id {}", id));
  }
  return it->second;
}

const std::string& Lattice::token(int id) const {
  return nodes_[IndexOf(id)].token;
}

std::span<const LatticeEdge> Lattice::out_edges(int id) const {
  const size_t i = IndexOf(id);
  return std::span<const LatticeEdge>(edges_).subspan(
      out_offset_[i], out_offset_[i + 1] - out_offset_[i]);
}

const std::vector<LatticeEdge>& Lattice::in_edges(int id) const {
  return in_[IndexOf(id)];
}

Lattice LatticeFromJson(const nlohmann::json& j) {
  try {
    std::vector<LatticeNode> nodes;
    for (const auto& n : j.at("nodes")) {
      nodes.push_back({n.at("id").get<int>(), n.at("token").get<std::string>()});
    }
    std::vector<LatticeEdge> edges;
    for (const auto& e : j.at("edges")) {
      edges.push_back({e.at("from").get<int>(), e.at("to").get<int>(),
                       e.at("score").get<double>()});
    }
    return Lattice(std::move(nodes), std::move(edges), j.at("start").get<int>(),
                   j.at("end").get<int>());
  } catch (const nlohmann::json::exception& ex) {
    throw LatticeError(fmt::format("bad lattice JSON: {}", ex.what()));
  }
}

nlohmann::json LatticeToJson(const Lattice& lattice) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : lattice.nodes()) {
    nodes.push_back({{"id", n.id}, {"token", n.token}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : lattice.edges()) {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"score", e.score}});
  }
  return {{"nodes", std::move(nodes)},
          {"edges", std::move(edges)},
          {"start", lattice.start()},
          {"end", lattice.end()}};
}

size_t CountPaths(const Lattice& lattice, size_t cap) {
  std::unordered_map<int, size_t> count;
  count[lattice.start()] = 1;
  for (int id : lattice.topological_order()) {
    const size_t c = count[id];
    for (const auto& e : lattice.out_edges(id)) {
      size_t& t = count[e.to];
      t = (cap - t < c) ? cap : t + c;
    }
  }
  return count[lattice.end()];
}

}  // namespace asrec

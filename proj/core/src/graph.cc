#include "jellyfish/graph.h"

#include <algorithm>
#include <string>
#include <tuple>
#include <utility>

#include "jellyfish/error.h"

namespace jellyfish {

Edge normalized(Edge e) {
  if (e.rel == RelType::kP2P && e.b < e.a) std::swap(e.a, e.b);
  return e;
}

bool canonical_less(const Edge& x, const Edge& y) {
  const Edge nx = normalized(x);
  const Edge ny = normalized(y);
  return std::tie(nx.a, nx.b, nx.rel) < std::tie(ny.a, ny.b, ny.rel);
}

AsGraph::AsGraph(std::size_t node_count) : adj_(node_count) {}

NodeId AsGraph::add_node() {
  adj_.emplace_back();
  return static_cast<NodeId>(adj_.size() - 1);
}

void AsGraph::check_node(NodeId v) const {
  if (v >= adj_.size()) {
    throw Error(ErrorCode::kNodeOutOfRange,
                "node " + std::to_string(v) + " >= node_count " +
                    std::to_string(adj_.size()));
  }
}

std::uint64_t AsGraph::pair_key(NodeId u, NodeId v) {
  if (v < u) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

void AsGraph::add_edge(const Edge& e) {
  check_node(e.a);
  check_node(e.b);
  if (e.a == e.b) {
    throw Error(ErrorCode::kSelfLoop, "node " + std::to_string(e.a));
  }
  const std::uint64_t key = pair_key(e.a, e.b);
  if (auto it = pair_index_.find(key); it != pair_index_.end()) {
    const Edge& old = edges_[it->second];
    const bool same = normalized(old) == normalized(e);
    throw Error(same ? ErrorCode::kDuplicateEdge
                     : ErrorCode::kConflictingRelationship,
                "pair (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                    ")");
  }
  pair_index_.emplace(key, static_cast<std::uint32_t>(edges_.size()));
  edges_.push_back(e);
  if (e.rel == RelType::kP2P) {
    adj_[e.a].peers.push_back(e.b);
    adj_[e.b].peers.push_back(e.a);
  } else {
    adj_[e.a].providers.push_back(e.b);
    adj_[e.b].customers.push_back(e.a);
  }
}

std::size_t AsGraph::degree(NodeId v) const {
  check_node(v);
  const Adjacency& a = adj_[v];
  return a.peers.size() + a.providers.size() + a.customers.size();
}

std::size_t AsGraph::p2p_degree(NodeId v) const {
  check_node(v);
  return adj_[v].peers.size();
}

std::size_t AsGraph::provider_count(NodeId v) const {
  check_node(v);
  return adj_[v].providers.size();
}

std::size_t AsGraph::customer_count(NodeId v) const {
  check_node(v);
  return adj_[v].customers.size();
}

std::size_t AsGraph::cp_degree(NodeId v) const {
  check_node(v);
  return adj_[v].providers.size() + adj_[v].customers.size();
}

std::span<const NodeId> AsGraph::peers(NodeId v) const {
  check_node(v);
  return adj_[v].peers;
}

std::span<const NodeId> AsGraph::providers(NodeId v) const {
  check_node(v);
  return adj_[v].providers;
}

std::span<const NodeId> AsGraph::customers(NodeId v) const {
  check_node(v);
  return adj_[v].customers;
}

std::optional<Edge> AsGraph::find_edge(NodeId u, NodeId v) const {
  if (u >= adj_.size() || v >= adj_.size() || u == v) return std::nullopt;
  auto it = pair_index_.find(pair_key(u, v));
  if (it == pair_index_.end()) return std::nullopt;
  return edges_[it->second];
}

bool AsGraph::adjacent(NodeId u, NodeId v) const {
  if (u == v) return false;
  return pair_index_.contains(pair_key(u, v));
}

std::vector<Edge> AsGraph::canonical_edges() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const Edge& e : edges_) out.push_back(normalized(e));
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<int> bfs_distances(const AsGraph& g, std::span<const NodeId> sources) {
  std::vector<int> dist(g.node_count(), kUnreachable);
  std::vector<NodeId> frontier;
  frontier.reserve(g.node_count());
  for (NodeId s : sources) {
    if (s >= g.node_count()) {
      throw Error(ErrorCode::kNodeOutOfRange, "bfs source " + std::to_string(s));
    }
    if (dist[s] == kUnreachable) {
      dist[s] = 0;
      frontier.push_back(s);
    }
  }
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const NodeId v = frontier[head];
    const int next = dist[v] + 1;
    g.for_each_neighbor(v, [&](NodeId u) {
      if (dist[u] == kUnreachable) {
        dist[u] = next;
        frontier.push_back(u);
      }
    });
  }
  return dist;
}

std::vector<std::vector<NodeId>> connected_components(const AsGraph& g) {
  std::vector<std::vector<NodeId>> out;
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> stack;
  for (NodeId root = 0; root < g.node_count(); ++root) {
    if (seen[root]) continue;
    std::vector<NodeId> comp;
    seen[root] = 1;
    stack.push_back(root);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      g.for_each_neighbor(v, [&](NodeId u) {
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      });
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace jellyfish

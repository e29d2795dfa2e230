#ifndef JELLYFISH_GRAPH_H_
#define JELLYFISH_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace jellyfish {

using NodeId = std::uint32_t;

enum class RelType : std::uint8_t { kP2P, kCP };

// For kCP, `a` is the customer and `b` the provider. A P2P edge (a,b) is the
// same edge as (b,a).
struct Edge {
  NodeId a = 0;
  NodeId b = 0;
  RelType rel = RelType::kP2P;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Orders edges by (a, b, rel) after normalising P2P endpoints to a < b.
Edge normalized(Edge e);
bool canonical_less(const Edge& x, const Edge& y);

// AS-relationship graph. Each unordered node pair holds at most one edge, of
// exactly one relationship type. Construction is single-writer; a fully built
// graph is safe for concurrent readers.
class AsGraph {
 public:
  AsGraph() = default;
  explicit AsGraph(std::size_t node_count);

  NodeId add_node();
  // Throws Error{kNodeOutOfRange, kSelfLoop, kDuplicateEdge,
  // kConflictingRelationship}.
  void add_edge(const Edge& e);

  std::size_t node_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return adj_.empty(); }

  std::size_t degree(NodeId v) const;
  std::size_t p2p_degree(NodeId v) const;
  std::size_t provider_count(NodeId v) const;
  std::size_t customer_count(NodeId v) const;
  std::size_t cp_degree(NodeId v) const;

  std::span<const NodeId> peers(NodeId v) const;
  std::span<const NodeId> providers(NodeId v) const;
  std::span<const NodeId> customers(NodeId v) const;

  // The edge joining u and v in either orientation, if any.
  std::optional<Edge> find_edge(NodeId u, NodeId v) const;
  bool adjacent(NodeId u, NodeId v) const;

  // Edges in insertion order. Per-edge side tables elsewhere index into this.
  const std::vector<Edge>& edges() const { return edges_; }
  std::vector<Edge> canonical_edges() const;

  template <typename Fn>
  void for_each_neighbor(NodeId v, Fn&& fn) const {
    const Adjacency& a = adj_[v];
    for (NodeId u : a.peers) fn(u);
    for (NodeId u : a.providers) fn(u);
    for (NodeId u : a.customers) fn(u);
  }

 private:
  struct Adjacency {
    std::vector<NodeId> peers;
    std::vector<NodeId> providers;
    std::vector<NodeId> customers;
  };

  void check_node(NodeId v) const;
  static std::uint64_t pair_key(NodeId u, NodeId v);

  std::vector<Adjacency> adj_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::uint32_t> pair_index_;
};

inline constexpr int kUnreachable = -1;

// Hop distances over all edges regardless of type or direction.
std::vector<int> bfs_distances(const AsGraph& g, std::span<const NodeId> sources);

// Maximal sets under undirected reachability, each sorted, ordered by their
// smallest member.
std::vector<std::vector<NodeId>> connected_components(const AsGraph& g);

}  // namespace jellyfish

#endif  // JELLYFISH_GRAPH_H_

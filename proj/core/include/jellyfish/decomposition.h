#ifndef JELLYFISH_DECOMPOSITION_H_
#define JELLYFISH_DECOMPOSITION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "jellyfish/graph.h"
#include "jellyfish/random.h"

namespace jellyfish {

inline constexpr int kNoRing = -1;

enum class EdgeKind : std::uint8_t {
  kRing,      // both endpoints in ring r (r == s)
  kBridge,    // ring r to ring s, r < s
  kHanger,    // degree-1 node to its origin ring r (s == kNoRing)
  kExcluded,  // touches a node left out of the decomposition
};

struct EdgeClass {
  EdgeKind kind = EdgeKind::kExcluded;
  int r = kNoRing;
  int s = kNoRing;

  friend bool operator==(const EdgeClass&, const EdgeClass&) = default;
};

// Assignment of every node to the core (ring 0), a ring r >= 1, a hanger set,
// or the excluded debris list; plus the class of every edge, indexed like
// AsGraph::edges().
struct Decomposition {
  std::vector<NodeId> core;
  std::vector<int> ring_of;        // kNoRing for hangers and excluded nodes
  std::vector<int> hanger_origin;  // kNoRing for non-hangers
  int ring_count = 0;              // highest ring index present
  std::vector<EdgeClass> edge_class;

  // Debris reported instead of being silently assigned.
  std::vector<NodeId> unreachable;     // no path to the core
  std::vector<NodeId> isolated_pairs;  // degree-1 nodes whose neighbour is also degree 1

  bool is_hanger(NodeId v) const { return hanger_origin[v] != kNoRing; }
  bool in_ring(NodeId v) const { return ring_of[v] != kNoRing; }
  bool excluded(NodeId v) const { return !in_ring(v) && !is_hanger(v); }

  std::size_t ring_size(int r) const;
  std::size_t hanger_count(int r) const;
  std::vector<NodeId> ring_members(int r) const;
};

// Greedy clique seeded at the highest-degree node; candidates are scanned once
// in descending degree order (ties by lower id) and kept iff they have a P2P
// edge to every member so far. Throws Error{kEmptyGraph}.
std::vector<NodeId> find_core(const AsGraph& g);

// Ring index of a non-hanger node is its hop distance to the core over all
// edges; degree-1 non-core nodes become hangers of their neighbour's ring.
// Nodes that cannot reach the core are listed in `unreachable`.
// Throws Error{kInvalidDecomposition} if `core` is not a P2P clique.
Decomposition assign_rings(const AsGraph& g, std::span<const NodeId> core);

Decomposition decompose(const AsGraph& g);

// Fills ring_count and edge_class from ring_of / hanger_origin. Used for
// assignments that did not come from assign_rings (e.g. a generator's
// construction-time layout).
void classify_edges(const AsGraph& g, Decomposition& d);

// Structural validity: partition of the node set, core clique, hanger degree,
// edge classes consistent with endpoint roles. Throws
// Error{kInvalidDecomposition} with the first problem found.
void validate(const AsGraph& g, const Decomposition& d);

// Checks d(u, w) <= ring(u) + ring(w) + 1 for pairs of ring nodes. Exact over
// all sources up to kExactPairLimit nodes, otherwise over kSampledSources
// uniformly drawn sources.
struct LayerBoundCheck {
  std::vector<std::pair<NodeId, NodeId>> violations;
  std::size_t sources = 0;
  std::size_t pairs_checked = 0;
  bool sampled = false;

  bool ok() const { return violations.empty(); }
};

inline constexpr std::size_t kExactPairLimit = 2000;
inline constexpr std::size_t kSampledSources = 1000;

LayerBoundCheck layer_distance_bound_check(const AsGraph& g,
                                           const Decomposition& d,
                                           std::uint64_t seed = kDefaultSeed);

}  // namespace jellyfish

#endif  // JELLYFISH_DECOMPOSITION_H_

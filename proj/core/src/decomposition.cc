#include "jellyfish/decomposition.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "jellyfish/error.h"

namespace jellyfish {

std::size_t Decomposition::ring_size(int r) const {
  return static_cast<std::size_t>(std::count(ring_of.begin(), ring_of.end(), r));
}

std::size_t Decomposition::hanger_count(int r) const {
  return static_cast<std::size_t>(
      std::count(hanger_origin.begin(), hanger_origin.end(), r));
}

std::vector<NodeId> Decomposition::ring_members(int r) const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < ring_of.size(); ++v) {
    if (ring_of[v] == r) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> find_core(const AsGraph& g) {
  if (g.empty()) throw Error(ErrorCode::kEmptyGraph, "find_core");
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId x, NodeId y) {
    return g.degree(x) > g.degree(y);
  });

  std::vector<NodeId> core{order.front()};
  for (std::size_t i = 1; i < order.size(); ++i) {
    const NodeId cand = order[i];
    // Cheap reject: a member needs at least |core| peers.
    if (g.p2p_degree(cand) < core.size()) continue;
    const bool joins = std::all_of(core.begin(), core.end(), [&](NodeId m) {
      auto e = g.find_edge(cand, m);
      return e && e->rel == RelType::kP2P;
    });
    if (joins) core.push_back(cand);
  }
  std::sort(core.begin(), core.end());
  return core;
}

void classify_edges(const AsGraph& g, Decomposition& d) {
  int top = 0;
  for (int r : d.ring_of) top = std::max(top, r);
  d.ring_count = top;
  d.edge_class.assign(g.edge_count(), EdgeClass{});
  const auto& edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    EdgeClass& c = d.edge_class[i];
    const int ra = d.ring_of[e.a];
    const int rb = d.ring_of[e.b];
    if (ra != kNoRing && rb != kNoRing) {
      c.r = std::min(ra, rb);
      c.s = std::max(ra, rb);
      c.kind = c.r == c.s ? EdgeKind::kRing : EdgeKind::kBridge;
    } else if (d.hanger_origin[e.a] != kNoRing && rb != kNoRing) {
      c = {EdgeKind::kHanger, d.hanger_origin[e.a], kNoRing};
    } else if (d.hanger_origin[e.b] != kNoRing && ra != kNoRing) {
      c = {EdgeKind::kHanger, d.hanger_origin[e.b], kNoRing};
    } else {
      c = {EdgeKind::kExcluded, kNoRing, kNoRing};
    }
  }
}

namespace {

void check_core_clique(const AsGraph& g, std::span<const NodeId> core) {
  for (std::size_t i = 0; i < core.size(); ++i) {
    if (core[i] >= g.node_count()) {
      throw Error(ErrorCode::kInvalidDecomposition,
                  "core node " + std::to_string(core[i]) + " out of range");
    }
    for (std::size_t j = i + 1; j < core.size(); ++j) {
      auto e = g.find_edge(core[i], core[j]);
      if (!e || e->rel != RelType::kP2P) {
        throw Error(ErrorCode::kInvalidDecomposition,
                    "core is not a P2P clique: " + std::to_string(core[i]) +
                        " / " + std::to_string(core[j]));
      }
    }
  }
}

}  // namespace

Decomposition assign_rings(const AsGraph& g, std::span<const NodeId> core) {
  if (g.empty()) throw Error(ErrorCode::kEmptyGraph, "assign_rings");
  if (core.empty()) {
    throw Error(ErrorCode::kInvalidDecomposition, "empty core");
  }
  check_core_clique(g, core);

  const std::size_t n = g.node_count();
  Decomposition d;
  d.core.assign(core.begin(), core.end());
  std::sort(d.core.begin(), d.core.end());
  d.ring_of.assign(n, kNoRing);
  d.hanger_origin.assign(n, kNoRing);

  std::vector<char> is_core(n, 0);
  for (NodeId c : d.core) is_core[c] = 1;
  auto hanger_like = [&](NodeId v) { return !is_core[v] && g.degree(v) == 1; };

  // Degree-1 nodes never enter a frontier.
  std::vector<NodeId> frontier(d.core.begin(), d.core.end());
  for (NodeId c : d.core) d.ring_of[c] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const NodeId v = frontier[head];
    const int next = d.ring_of[v] + 1;
    g.for_each_neighbor(v, [&](NodeId u) {
      if (d.ring_of[u] == kNoRing && !hanger_like(u)) {
        d.ring_of[u] = next;
        frontier.push_back(u);
      }
    });
  }

  for (NodeId v = 0; v < n; ++v) {
    if (d.ring_of[v] != kNoRing) continue;
    if (hanger_like(v)) {
      NodeId nb = 0;
      g.for_each_neighbor(v, [&](NodeId u) { nb = u; });
      if (d.ring_of[nb] != kNoRing) {
        d.hanger_origin[v] = d.ring_of[nb];
      } else if (g.degree(nb) == 1) {
        d.isolated_pairs.push_back(v);
      } else {
        d.unreachable.push_back(v);
      }
    } else {
      d.unreachable.push_back(v);
    }
  }
  classify_edges(g, d);
  return d;
}

Decomposition decompose(const AsGraph& g) {
  const std::vector<NodeId> core = find_core(g);
  return assign_rings(g, core);
}

void validate(const AsGraph& g, const Decomposition& d) {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidDecomposition, why);
  };
  const std::size_t n = g.node_count();
  if (d.ring_of.size() != n || d.hanger_origin.size() != n) {
    fail("assignment tables do not match node count");
  }
  if (d.edge_class.size() != g.edge_count()) {
    fail("edge class table does not match edge count");
  }
  if (d.core.empty()) fail("empty core");
  check_core_clique(g, d.core);
  for (NodeId c : d.core) {
    if (d.ring_of[c] != 0) fail("core node " + std::to_string(c) + " not in ring 0");
  }
  if (d.ring_size(0) != d.core.size()) fail("ring 0 differs from the core set");

  std::vector<char> debris(n, 0);
  for (NodeId v : d.unreachable) debris[v] = 1;
  for (NodeId v : d.isolated_pairs) debris[v] = 1;
  for (NodeId v = 0; v < n; ++v) {
    const int roles = (d.ring_of[v] != kNoRing) + (d.hanger_origin[v] != kNoRing) +
                      (debris[v] != 0);
    if (roles != 1) fail("node " + std::to_string(v) + " has " +
                         std::to_string(roles) + " roles");
    if (d.hanger_origin[v] != kNoRing && g.degree(v) != 1) {
      fail("hanger " + std::to_string(v) + " has degree " +
           std::to_string(g.degree(v)));
    }
  }
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    const EdgeClass& c = d.edge_class[i];
    const int ra = d.ring_of[e.a];
    const int rb = d.ring_of[e.b];
    bool ok = false;
    switch (c.kind) {
      case EdgeKind::kRing:
        ok = ra == c.r && rb == c.r && c.s == c.r;
        break;
      case EdgeKind::kBridge:
        ok = c.r < c.s && std::min(ra, rb) == c.r && std::max(ra, rb) == c.s &&
             ra != kNoRing && rb != kNoRing;
        break;
      case EdgeKind::kHanger:
        ok = (d.hanger_origin[e.a] == c.r && rb == c.r) ||
             (d.hanger_origin[e.b] == c.r && ra == c.r);
        break;
      case EdgeKind::kExcluded:
        ok = debris[e.a] || debris[e.b];
        break;
    }
    if (!ok) fail("edge " + std::to_string(i) + " misclassified");
  }
}

LayerBoundCheck layer_distance_bound_check(const AsGraph& g,
                                           const Decomposition& d,
                                           std::uint64_t seed) {
  LayerBoundCheck out;
  std::vector<NodeId> ring_nodes;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (d.ring_of[v] != kNoRing) ring_nodes.push_back(v);
  }
  std::vector<NodeId> sources = ring_nodes;
  if (g.node_count() > kExactPairLimit && sources.size() > kSampledSources) {
    Rng rng(seed);
    shuffle(sources, rng);
    sources.resize(kSampledSources);
    std::sort(sources.begin(), sources.end());
    out.sampled = true;
  }
  out.sources = sources.size();
  for (NodeId u : sources) {
    const NodeId src[] = {u};
    const std::vector<int> dist = bfs_distances(g, src);
    for (NodeId w : ring_nodes) {
      if (w == u) continue;
      ++out.pairs_checked;
      const int bound = d.ring_of[u] + d.ring_of[w] + 1;
      if (dist[w] == kUnreachable || dist[w] > bound) {
        out.violations.emplace_back(u, w);
      }
    }
  }
  return out;
}

}  // namespace jellyfish

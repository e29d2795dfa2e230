#include <algorithm>

#include "doctest.h"
#include "jellyfish/decomposition.h"
#include "jellyfish/error.h"
#include "jellyfish/generator.h"
#include "jellyfish/io.h"
#include "test_support.h"

using namespace jellyfish;

namespace {

// 4-clique core {0..3}; 4,5 in ring 1; 6 in ring 2; hanger 7 on node 6;
// hanger 8 on core node 0.
AsGraph layered() {
  AsGraph g = testing::clique(4);
  for (int i = 0; i < 5; ++i) g.add_node();
  g.add_edge({4, 0, RelType::kCP});
  g.add_edge({4, 1, RelType::kCP});
  g.add_edge({5, 2, RelType::kCP});
  g.add_edge({4, 5, RelType::kP2P});
  g.add_edge({6, 4, RelType::kCP});
  g.add_edge({6, 5, RelType::kCP});
  g.add_edge({7, 6, RelType::kCP});
  g.add_edge({8, 0, RelType::kCP});
  return g;
}

}  // namespace

TEST_CASE("greedy core finds the clique") {
  const AsGraph g = layered();
  CHECK(find_core(g) == std::vector<NodeId>{0, 1, 2, 3});
  CHECK(find_core(testing::clique(9)).size() == 9);
  CHECK_THROWS_AS(find_core(AsGraph{}), Error);
}

TEST_CASE("rings, hangers and edge classes on a hand-built graph") {
  const AsGraph g = layered();
  const Decomposition d = decompose(g);
  validate(g, d);
  CHECK(d.ring_of == std::vector<int>{0, 0, 0, 0, 1, 1, 2, kNoRing, kNoRing});
  CHECK(d.hanger_origin[7] == 2);
  CHECK(d.hanger_origin[8] == 0);
  CHECK(d.ring_count == 2);
  CHECK(d.ring_size(1) == 2);
  CHECK(d.hanger_count(0) == 1);
  const auto e = g.edges();
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto& c = d.edge_class[i];
    if (e[i].a == 4 && e[i].b == 5) {
      CHECK(c.kind == EdgeKind::kRing);
      CHECK(c.r == 1);
    }
    if (e[i].a == 6 && e[i].b == 4) {
      CHECK(c.kind == EdgeKind::kBridge);
      CHECK(c.r == 1);
      CHECK(c.s == 2);
    }
    if (e[i].a == 7) CHECK(c.kind == EdgeKind::kHanger);
  }
}

TEST_CASE("core neighbour goes to ring 1 and a leaf on ring 2 is a ring-2 hanger") {
  // Core members must outrank `a` in degree for the greedy seed.
  AsGraph g = testing::clique(5);
  const NodeId a = g.add_node();
  const NodeId b = g.add_node();
  const NodeId c = g.add_node();
  const NodeId leaf = g.add_node();
  g.add_edge({a, 0, RelType::kCP});
  g.add_edge({a, 1, RelType::kCP});
  g.add_edge({b, a, RelType::kCP});
  g.add_edge({c, a, RelType::kCP});
  g.add_edge({b, c, RelType::kP2P});
  g.add_edge({leaf, b, RelType::kCP});
  const Decomposition d = decompose(g);
  CHECK(d.ring_of[a] == 1);
  CHECK(d.ring_of[b] == 2);
  CHECK(d.hanger_origin[leaf] == 2);
}

TEST_CASE("debris is kept out of rings and hangers") {
  AsGraph g = testing::clique(3);
  const NodeId p = g.add_node();
  const NodeId q = g.add_node();
  const NodeId x = g.add_node();
  const NodeId y = g.add_node();
  const NodeId z = g.add_node();
  g.add_edge({p, q, RelType::kP2P});  // isolated pair
  g.add_edge({x, y, RelType::kP2P});  // stranded triangle
  g.add_edge({y, z, RelType::kP2P});
  g.add_edge({z, x, RelType::kP2P});
  const Decomposition d = decompose(g);
  validate(g, d);
  CHECK(d.isolated_pairs.size() == 2);
  CHECK(d.unreachable.size() == 3);
  CHECK(d.excluded(p));
  CHECK(d.excluded(x));
}

TEST_CASE("a non-clique core is rejected") {
  const AsGraph g = testing::path(4);
  const NodeId core[] = {0, 2};
  CHECK_THROWS_AS(assign_rings(g, core), Error);
}

TEST_CASE("validate catches a tampered decomposition") {
  const AsGraph g = layered();
  Decomposition d = decompose(g);
  d.ring_of[7] = 3;
  CHECK_THROWS_AS(validate(g, d), Error);
}

TEST_CASE("ring index equals distance to the core (Floyd-Warshall oracle)") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    const AsGraph g = testing::random_graph(120, 0.03, seed);
    const Decomposition d = decompose(g);
    validate(g, d);
    const auto dist = testing::all_pairs(g);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      int best = testing::kInf;
      for (NodeId c : d.core) best = std::min(best, dist[v][c]);
      if (d.in_ring(v)) {
        CHECK(d.ring_of[v] == best);
        if (d.ring_of[v] >= 1) {
          bool has_inner = false;
          g.for_each_neighbor(v, [&](NodeId u) { has_inner |= d.ring_of[u] == d.ring_of[v] - 1; });
          CHECK(has_inner);
        }
      } else if (d.is_hanger(v)) {
        CHECK(g.degree(v) == 1);
        CHECK(d.hanger_origin[v] == best - 1);
      } else {
        CHECK(best == testing::kInf);
      }
    }
  }
}

TEST_CASE("layer distance bound holds on a 200-node generated graph") {
  const auto profile = load_profile(JELLYFISH_DATA_DIR "/as_snapshot_profile.json");
  GeneratorConfig cfg;
  cfg.target_nodes = 200;
  cfg.seed = 5;
  const auto result = generate(profile, cfg);
  const AsGraph& g = result.graph;
  const Decomposition d = decompose(g);
  const auto check = layer_distance_bound_check(g, d);
  CHECK(check.ok());
  CHECK_FALSE(check.sampled);

  // The oracle recomputes the same bound from all-pairs distances.
  const auto dist = testing::all_pairs(g);
  std::size_t violations = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId w = 0; w < g.node_count(); ++w) {
      if (u == w || !d.in_ring(u) || !d.in_ring(w)) continue;
      if (dist[u][w] > d.ring_of[u] + d.ring_of[w] + 1) ++violations;
    }
  }
  CHECK(violations == 0);
  CHECK(check.pairs_checked > 0);
}

TEST_CASE("a broken layering is reported") {
  // Ring labels claim both ends of a long path sit next to the core.
  const AsGraph g = testing::path(8);
  Decomposition d;
  d.core = {0};
  d.ring_of = {0, 1, 1, 1, 1, 1, 1, 1};
  d.hanger_origin.assign(8, kNoRing);
  classify_edges(g, d);
  const auto check = layer_distance_bound_check(g, d);
  CHECK_FALSE(check.ok());
}

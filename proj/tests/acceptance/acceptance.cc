// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Usage: acceptance <profile.json>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "jellyfish/decomposition.h"
#include "jellyfish/error.h"
#include "jellyfish/generator.h"
#include "jellyfish/io.h"
#include "jellyfish/metrics.h"
#include "jellyfish/profile.h"
#include "jellyfish/random.h"

using namespace jellyfish;

namespace {

constexpr std::uint64_t kSeed = 1;
constexpr std::uint64_t kReferenceSeed = 2;
constexpr double kSourceNodes = 19936;

// Published decomposition of the source snapshot: nodes, intra P2P, intra CP.
struct RingRow { std::size_t nodes, p2p, cp; };
const RingRow kRings[] = {{9, 36, 0},       {6419, 12873, 7396}, {6102, 1167, 1481},
                          {1245, 165, 190}, {151, 3, 8},         {6, 0, 0}};
const std::size_t kHangers[] = {1254, 2912, 1420, 377, 39, 1};
struct BridgeRow { int r, s; std::size_t p2p, cp; };
const BridgeRow kBridges[] = {{0, 1, 521, 9104}, {0, 2, 91, 0},     {0, 3, 2, 0},
                              {1, 2, 5532, 11679}, {1, 3, 261, 930}, {1, 4, 24, 56},
                              {1, 5, 2, 0},      {2, 3, 514, 1216}, {2, 4, 27, 87},
                              {3, 4, 24, 106},   {3, 5, 1, 2},      {4, 5, 0, 6}};

// Generated and source columns of the published comparison.
struct Table4 { double nodes, edges, avg, max, mir, local, clustering; };
constexpr Table4 kSource{19936, 59508, 5.9, 2430, 0.95, 1, 0.061};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

class Criterion {
 public:
  Criterion(int number, std::string title) : number_(number), title_(std::move(title)) {}

  void item(bool ok, const std::string& text) {
    ok_ = ok_ && ok;
    details_.push_back(std::string(ok ? "    ok   " : "    FAIL ") + text);
  }
  void note(const std::string& text) { details_.push_back("    note " + text); }

  bool report() const {
    std::printf("criterion %d: %s %s\n", number_, ok_ ? "PASS" : "FAIL", title_.c_str());
    for (const auto& d : details_) std::printf("%s\n", d.c_str());
    std::fflush(stdout);
    return ok_;
  }

 private:
  int number_;
  std::string title_;
  bool ok_ = true;
  std::vector<std::string> details_;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

GenerationResult run(const JellyfishProfile& p, std::size_t nodes, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.target_nodes = nodes;
  cfg.seed = seed;
  return generate(p, cfg);
}

bool connected(const AsGraph& g) {
  if (g.empty()) return false;
  const NodeId source = 0;
  const auto dist = bfs_distances(g, {&source, 1});
  return std::none_of(dist.begin(), dist.end(), [](auto d) { return d == kUnreachable; });
}

void count_item(Criterion& c, const std::string& what, std::size_t got, std::size_t want) {
  const double tol = 0.03 * static_cast<double>(want);
  const double delta = std::abs(static_cast<double>(got) - static_cast<double>(want));
  c.item(delta <= tol, fmt("%s %zu vs %zu", what.c_str(), got, want));
}

bool criterion_round_trip(const JellyfishProfile& profile) {
  Criterion c(1, "profile round trip at full scale");
  Timer t;
  const auto gen = run(profile, profile.total_nodes, kSeed);
  const auto d = decompose(gen.graph);
  const auto back = extract_profile(gen.graph, d);
  const double elapsed = t.seconds();
  const double n = static_cast<double>(gen.graph.node_count());
  for (int r = 0; r < 6; ++r) {
    const double got = r <= back.ring_count() ? back.rings[r].node_count / n : 0.0;
    const double want = kRings[r].nodes / kSourceNodes;
    c.item(std::abs(got - want) * 100 <= 1.5,
           fmt("ring %d node share %.2f%% vs %.2f%%", r, got * 100, want * 100));
  }
  for (int r = 0; r < 6; ++r) {
    const auto* h = back.hanger(r);
    const double got = h ? h->node_count / n : 0.0;
    const double want = kHangers[r] / kSourceNodes;
    c.item(std::abs(got - want) * 100 <= 1.0,
           fmt("hangers of ring %d share %.2f%% vs %.2f%%", r, got * 100, want * 100));
  }
  for (int r = 0; r < 6; ++r) {
    const bool have = r <= back.ring_count();
    count_item(c, fmt("ring %d P2P", r), have ? back.rings[r].p2p_intra : 0, kRings[r].p2p);
    count_item(c, fmt("ring %d CP", r), have ? back.rings[r].cp_intra : 0, kRings[r].cp);
  }
  for (const auto& b : kBridges) {
    const auto* got = back.bridge(b.r, b.s);
    count_item(c, fmt("bridge %d-%d P2P", b.r, b.s), got ? got->p2p_count : 0, b.p2p);
    count_item(c, fmt("bridge %d-%d CP", b.r, b.s), got ? got->cp_count : 0, b.cp);
  }
  c.item(elapsed < 120, fmt("runtime %.2f s", elapsed));
  return c.report();
}

bool criterion_table4(const JellyfishProfile& profile) {
  Criterion c(2, "comparison against the source snapshot");
  const auto ours = compute_metrics(run(profile, profile.total_nodes, kSeed).graph);
  const auto reference = compute_metrics(run(profile, profile.total_nodes, kReferenceSeed).graph);
  MetricsReport source;
  source.node_count = static_cast<std::size_t>(kSource.nodes);
  source.edge_count = static_cast<std::size_t>(kSource.edges);
  source.avg_degree = kSource.avg;
  source.max_degree = static_cast<std::size_t>(kSource.max);
  source.clustering_coefficient = kSource.clustering;
  source.max_local_clustering = kSource.local;
  auto tol = default_tolerances();
  tol.erase("mutual_information_ratio");
  tol.erase("effective_diameter");
  for (const auto& row : compare(ours, source, tol).rows) {
    c.item(row.pass, fmt("%s %.4g vs %.4g", row.metric.c_str(), row.a, row.b));
  }
  const double mir_delta =
      std::abs(ours.mutual_information_ratio - reference.mutual_information_ratio);
  c.item(mir_delta <= 0.05, fmt("MIR %.4f vs regenerated reference %.4f", ours.mutual_information_ratio,
                                reference.mutual_information_ratio));
  c.note(fmt("MIR against the published source value %.2f differs by %.3f", kSource.mir,
             std::abs(ours.mutual_information_ratio - kSource.mir)));
  return c.report();
}

bool criterion_diameter(const JellyfishProfile& profile) {
  Criterion c(3, "effective diameter and layer distance bound");
  const auto gen = run(profile, profile.total_nodes, kSeed);
  const auto s = distance_summary(gen.graph, kSeed);
  c.item(std::abs(s.effective_diameter - 5.0) <= 0.5,
         fmt("effective diameter %.3f (%s)", s.effective_diameter, s.sampled ? "sampled" : "exact"));
  const auto check = layer_distance_bound_check(gen.graph, decompose(gen.graph), kSeed);
  c.item(check.ok() && check.sources == kSampledSources,
         fmt("%zu violations over %zu sources, %zu pairs", check.violations.size(), check.sources,
             check.pairs_checked));
  return c.report();
}

bool criterion_shape(const JellyfishProfile& profile) {
  Criterion c(4, "degree distribution shape");
  const auto g = run(profile, profile.total_nodes, kSeed).graph;
  const auto ref = run(profile, profile.total_nodes, kReferenceSeed).graph;
  const auto fit = loglog_fit(degree_distribution(g));
  const auto ref_fit = loglog_fit(degree_distribution(ref));
  c.item(std::abs(fit.slope - ref_fit.slope) <= 0.3,
         fmt("exponent %.3f vs reference %.3f", -fit.slope, -ref_fit.slope));
  const auto tail = loglog_fit(degree_ccdf(g), 2);
  c.item(tail.r_squared >= 0.85,
         fmt("CCDF log-log R^2 %.3f over %zu points, slope %.3f", tail.r_squared, tail.points,
             tail.slope));
  return c.report();
}

// Bounds as the generator applies them, so shrunken runs can be checked too.
std::size_t bound_violations(const GenerationResult& r, const JellyfishProfile& p,
                             std::size_t& over_max) {
  std::size_t under_min = 0;
  over_max = 0;
  const auto& d = r.decomposition;
  for (NodeId v = 0; v < r.graph.node_count(); ++v) {
    if (!d.in_ring(v)) continue;
    const auto& b = p.rings[d.ring_of[v]].bounds;
    const auto p2p = r.graph.p2p_degree(v);
    const auto cp = r.graph.cp_degree(v);
    under_min += p2p < b.p2p_min || cp < b.cp_min;
    over_max += p2p > b.p2p_max || cp > b.cp_max;
  }
  return under_min;
}

bool cp_acyclic(const AsGraph& g) {
  std::vector<std::size_t> indeg(g.node_count(), 0);
  for (const Edge& e : g.edges()) indeg[e.b] += e.rel == RelType::kCP;
  std::vector<NodeId> ready;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (indeg[v] == 0) ready.push_back(v);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const NodeId v = ready.back();
    ready.pop_back();
    ++seen;
    for (NodeId w : g.providers(v)) {
      if (--indeg[w] == 0) ready.push_back(w);
    }
  }
  return seen == g.node_count();
}

bool criterion_constraints(const JellyfishProfile& profile) {
  Criterion c(5, "constraint suite and determinism");
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const auto r = run(profile, profile.total_nodes, seed);
    const auto& g = r.graph;
    const auto& d = r.decomposition;
    std::size_t upward = 0, hanger_degree = 0;
    for (const Edge& e : g.edges()) {
      if (e.rel != RelType::kCP) continue;
      const int rc = d.in_ring(e.a) ? d.ring_of[e.a] : d.hanger_origin[e.a];
      upward += d.ring_of[e.b] == kNoRing || d.ring_of[e.b] > rc;
    }
    for (NodeId v = 0; v < g.node_count(); ++v) hanger_degree += d.is_hanger(v) && g.degree(v) != 1;
    std::size_t over_max = 0;
    const std::size_t under_min = bound_violations(r, profile, over_max);
    c.item(cp_acyclic(g), fmt("seed %llu CP subgraph acyclic", static_cast<unsigned long long>(seed)));
    c.item(upward == 0, fmt("seed %llu CP edges pointing outward: %zu",
                            static_cast<unsigned long long>(seed), upward));
    c.item(connected(g), fmt("seed %llu connected", static_cast<unsigned long long>(seed)));
    c.item(hanger_degree == 0, fmt("seed %llu hangers above degree 1: %zu",
                                   static_cast<unsigned long long>(seed), hanger_degree));
    c.item(under_min == 0 && over_max <= r.report.bound_exemptions,
           fmt("seed %llu nodes below a minimum %zu, above a maximum %zu (repair exemptions %zu)",
               static_cast<unsigned long long>(seed), under_min, over_max,
               r.report.bound_exemptions));
  }
  const auto a = run(profile, profile.total_nodes, 7);
  const auto b = run(profile, profile.total_nodes, 7);
  c.item(a.graph.edges() == b.graph.edges(), "identical edge lists for a repeated seed");
  return c.report();
}

bool criterion_shrink(const JellyfishProfile& profile) {
  Criterion c(6, "shrinking to 2000 nodes");
  Timer t;
  const auto gen = run(profile, 2000, kSeed);
  const auto d = decompose(gen.graph);
  const double elapsed = t.seconds();
  const double n = static_cast<double>(gen.graph.node_count());
  for (int r = 0; r < 6; ++r) {
    const double got = r <= d.ring_count ? d.ring_size(r) / n : 0.0;
    const double want = kRings[r].nodes / kSourceNodes;
    c.item(std::abs(got - want) * 100 <= 3.0,
           fmt("ring %d node share %.2f%% vs %.2f%%", r, got * 100, want * 100));
  }
  c.item(connected(gen.graph), fmt("connected, %zu nodes", gen.graph.node_count()));
  const auto s = distance_summary(gen.graph, kSeed);
  c.item(s.effective_diameter <= 6.0, fmt("effective diameter %.3f", s.effective_diameter));
  c.item(elapsed < 10, fmt("runtime %.2f s", elapsed));
  return c.report();
}

// Brute force on a small graph: Floyd-Warshall plus triple loops.
struct Oracle {
  static constexpr int kInf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> dist;
  std::vector<std::vector<char>> adj;

  explicit Oracle(const AsGraph& g)
      : dist(g.node_count(), std::vector<int>(g.node_count(), kInf)),
        adj(g.node_count(), std::vector<char>(g.node_count(), 0)) {
    const std::size_t n = g.node_count();
    for (std::size_t i = 0; i < n; ++i) dist[i][i] = 0;
    for (const Edge& e : g.edges()) {
      dist[e.a][e.b] = dist[e.b][e.a] = 1;
      adj[e.a][e.b] = adj[e.b][e.a] = 1;
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
      }
    }
  }

  int diameter() const {
    int best = 0;
    for (const auto& row : dist) {
      for (int x : row) {
        if (x < kInf) best = std::max(best, x);
      }
    }
    return best;
  }

  double effective_diameter() const {
    std::map<int, double> count;
    double total = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      for (std::size_t j = 0; j < dist.size(); ++j) {
        if (i != j && dist[i][j] < kInf) {
          count[dist[i][j]] += 1;
          total += 1;
        }
      }
    }
    double cum = 0, prev = 0;
    for (auto [h, k] : count) {
      cum += k / total;
      if (cum >= kEffectiveQuantile) {
        return h == 1 ? 1.0 : (h - 1) + (kEffectiveQuantile - prev) / (cum - prev);
      }
      prev = cum;
    }
    return 0.0;
  }

  double clustering() const {
    const std::size_t n = adj.size();
    double sum = 0;
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<std::size_t> nb;
      for (std::size_t u = 0; u < n; ++u) {
        if (adj[v][u]) nb.push_back(u);
      }
      if (nb.size() < 2) continue;
      double links = 0;
      for (std::size_t i = 0; i < nb.size(); ++i) {
        for (std::size_t j = i + 1; j < nb.size(); ++j) links += adj[nb[i]][nb[j]];
      }
      sum += links / (nb.size() * (nb.size() - 1) / 2.0);
    }
    return sum / static_cast<double>(n);
  }

  int distance_to(const std::vector<NodeId>& core, NodeId v) const {
    int best = kInf;
    for (NodeId c : core) best = std::min(best, dist[c][v]);
    return best;
  }
};

AsGraph random_graph(std::size_t n, double p, Rng& rng) {
  AsGraph g(n);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (uniform01(rng) >= p) continue;
      g.add_edge(uniform01(rng) < 0.5 ? Edge{u, v, RelType::kP2P} : Edge{v, u, RelType::kCP});
    }
  }
  return g;
}

bool criterion_oracles() {
  Criterion c(7, "oracle equivalence on small random graphs");
  Rng rng(kSeed);
  constexpr double kEps = 1e-12;
  std::size_t graphs = 0, metric_mismatch = 0, ring_mismatch = 0, nodes_checked = 0;
  for (std::size_t n : {20u, 50u, 90u, 140u, 200u}) {
    for (double mean_degree : {1.5, 3.0, 6.0, 12.0}) {
      const AsGraph g = random_graph(n, mean_degree / (n - 1), rng);
      if (g.edge_count() == 0) continue;
      ++graphs;
      const Oracle o(g);
      const auto s = distance_summary(g);
      metric_mismatch += s.diameter != static_cast<std::size_t>(o.diameter());
      metric_mismatch += std::abs(s.effective_diameter - o.effective_diameter()) > kEps;
      metric_mismatch += std::abs(clustering(g).average - o.clustering()) > kEps;
      const auto d = decompose(g);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        ++nodes_checked;
        const int want = o.distance_to(d.core, v);
        const bool core = want == 0;
        if (!core && g.degree(v) == 1) {
          // Hangers take the ring of their only neighbour.
          NodeId w = 0;
          g.for_each_neighbor(v, [&](NodeId x) { w = x; });
          const bool paired = g.degree(w) == 1 && o.distance_to(d.core, w) != 0;
          const int origin = paired || want >= Oracle::kInf ? kNoRing : want - 1;
          ring_mismatch += d.hanger_origin[v] != origin;
        } else {
          ring_mismatch += d.ring_of[v] != (want >= Oracle::kInf ? kNoRing : want);
        }
      }
    }
  }
  c.item(metric_mismatch == 0,
         fmt("diameter, effective diameter and clustering on %zu graphs: %zu mismatches", graphs,
             metric_mismatch));
  c.item(ring_mismatch == 0,
         fmt("ring indices of %zu nodes: %zu mismatches", nodes_checked, ring_mismatch));
  return c.report();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <profile.json>\n");
    return 2;
  }
  try {
    const auto profile = load_profile(argv[1]);
    bool ok = true;
    ok &= criterion_round_trip(profile);
    ok &= criterion_table4(profile);
    ok &= criterion_diameter(profile);
    ok &= criterion_shape(profile);
    ok &= criterion_constraints(profile);
    ok &= criterion_shrink(profile);
    ok &= criterion_oracles();
    return ok ? 0 : 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s: %s\n", std::string(to_string(e.code())).c_str(), e.what());
    return 2;
  }
}

#include "jellyfish/metrics.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "jellyfish/error.h"

namespace jellyfish {
namespace {

void require_nodes(const AsGraph& g) {
  if (g.empty()) throw Error(ErrorCode::kEmptyGraph, "graph has no nodes");
}

std::vector<std::vector<NodeId>> undirected_adjacency(const AsGraph& g) {
  std::vector<std::vector<NodeId>> adj(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    adj[v].reserve(g.degree(v));
    g.for_each_neighbor(v, [&](NodeId u) { adj[v].push_back(u); });
  }
  return adj;
}

std::map<std::size_t, std::size_t> degree_counts(const AsGraph& g) {
  std::map<std::size_t, std::size_t> counts;
  for (NodeId v = 0; v < g.node_count(); ++v) ++counts[g.degree(v)];
  return counts;
}

double entropy_term(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

}  // namespace

Series degree_distribution(const AsGraph& g) {
  require_nodes(g);
  const double n = static_cast<double>(g.node_count());
  Series out;
  for (auto [k, c] : degree_counts(g)) {
    out.emplace_back(static_cast<std::uint32_t>(k), static_cast<double>(c) / n);
  }
  return out;
}

Series degree_ccdf(const AsGraph& g) {
  require_nodes(g);
  const double n = static_cast<double>(g.node_count());
  const auto counts = degree_counts(g);
  Series out;
  std::size_t above = g.node_count();
  for (auto [k, c] : counts) {
    above -= c;
    out.emplace_back(static_cast<std::uint32_t>(k), static_cast<double>(above) / n);
  }
  return out;
}

double effective_diameter_from_hops(std::span<const std::uint64_t> hops) {
  const std::uint64_t total = std::accumulate(hops.begin(), hops.end(), std::uint64_t{0});
  if (total == 0) return 0.0;
  double prev = 0.0;
  std::uint64_t running = 0;
  for (std::size_t d = 1; d < hops.size(); ++d) {
    running += hops[d];
    const double f = static_cast<double>(running) / static_cast<double>(total);
    if (f >= kEffectiveQuantile) {
      if (d == 1) return 1.0;
      return static_cast<double>(d - 1) + (kEffectiveQuantile - prev) / (f - prev);
    }
    prev = f;
  }
  return static_cast<double>(hops.size() - 1);
}

DistanceSummary distance_summary(const AsGraph& g, std::uint64_t seed) {
  require_nodes(g);
  const std::size_t n = g.node_count();
  DistanceSummary out;
  std::vector<NodeId> sources(n);
  std::iota(sources.begin(), sources.end(), NodeId{0});
  if (n > kExactDistanceLimit) {
    Rng rng(seed);
    shuffle(sources, rng);
    sources.resize(kDistanceSources);
    std::sort(sources.begin(), sources.end());
    out.sampled = true;
  }

  const auto adj = undirected_adjacency(g);
  std::vector<int> dist(n, -1);
  std::vector<NodeId> queue;
  queue.reserve(n);
  out.hops.assign(1, 0);
  for (NodeId s : sources) {
    queue.assign(1, s);
    dist[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId v = queue[head];
      const auto dv = static_cast<std::size_t>(dist[v]);
      for (NodeId u : adj[v]) {
        if (dist[u] >= 0) continue;
        dist[u] = dist[v] + 1;
        if (out.hops.size() <= dv + 1) out.hops.resize(dv + 2, 0);
        ++out.hops[dv + 1];
        queue.push_back(u);
      }
    }
    for (NodeId v : queue) dist[v] = -1;
  }
  out.diameter = out.hops.size() - 1;
  out.effective_diameter = effective_diameter_from_hops(out.hops);
  return out;
}

std::vector<double> local_clustering(const AsGraph& g) {
  require_nodes(g);
  const std::size_t n = g.node_count();
  const auto adj = undirected_adjacency(g);
  // Orient each edge toward the higher (degree, id); each triangle is then
  // found once from its lowest vertex.
  auto before = [&](NodeId a, NodeId b) {
    return adj[a].size() != adj[b].size() ? adj[a].size() < adj[b].size() : a < b;
  };
  std::vector<std::vector<NodeId>> out(n);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : adj[v]) {
      if (before(v, u)) out[v].push_back(u);
    }
  }
  std::vector<std::uint64_t> tri(n, 0);
  std::vector<NodeId> mark(n, static_cast<NodeId>(-1));
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : out[v]) mark[u] = v;
    for (NodeId u : out[v]) {
      for (NodeId w : out[u]) {
        if (mark[w] == v) {
          ++tri[v];
          ++tri[u];
          ++tri[w];
        }
      }
    }
  }
  std::vector<double> c(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    const double k = static_cast<double>(adj[v].size());
    if (k >= 2) c[v] = static_cast<double>(tri[v]) / (k * (k - 1) / 2.0);
  }
  return c;
}

ClusteringSummary clustering(const AsGraph& g) {
  const auto c = local_clustering(g);
  ClusteringSummary s;
  s.average = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(c.size());
  s.max_local = *std::max_element(c.begin(), c.end());
  return s;
}

double mutual_information_ratio(const AsGraph& g) {
  if (g.edge_count() == 0) throw Error(ErrorCode::kNoEdges, "graph has no edges");
  auto bin = [&](NodeId v) { return std::bit_width(g.degree(v)) - 1; };
  std::map<std::pair<int, int>, std::uint64_t> joint;
  std::map<int, std::uint64_t> marginal;
  for (const Edge& e : g.edges()) {
    const int x = bin(e.a);
    const int y = bin(e.b);
    ++joint[{x, y}];
    ++joint[{y, x}];
    ++marginal[x];
    ++marginal[y];
  }
  const double total = 2.0 * static_cast<double>(g.edge_count());
  double h = 0.0;
  for (auto [x, c] : marginal) h += entropy_term(static_cast<double>(c) / total);
  if (h <= 0.0) return 1.0;
  double mi = 0.0;
  for (auto [xy, c] : joint) {
    const double pxy = static_cast<double>(c) / total;
    const double px = static_cast<double>(marginal[xy.first]) / total;
    const double py = static_cast<double>(marginal[xy.second]) / total;
    mi += pxy * std::log(pxy / (px * py));
  }
  return std::clamp(mi / h, 0.0, 1.0);
}

MetricsReport compute_metrics(const AsGraph& g, std::uint64_t seed) {
  require_nodes(g);
  MetricsReport r;
  r.node_count = g.node_count();
  r.edge_count = g.edge_count();
  r.avg_degree = 2.0 * static_cast<double>(r.edge_count) / static_cast<double>(r.node_count);
  r.min_degree = g.degree(0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    r.max_degree = std::max(r.max_degree, g.degree(v));
    r.min_degree = std::min(r.min_degree, g.degree(v));
  }
  r.degree_distribution = degree_distribution(g);
  r.degree_ccdf = degree_ccdf(g);
  const auto d = distance_summary(g, seed);
  r.diameter = d.diameter;
  r.diameter_sampled = d.sampled;
  r.effective_diameter = d.effective_diameter;
  r.effective_diameter_sampled = d.sampled;
  const auto c = clustering(g);
  r.clustering_coefficient = c.average;
  r.max_local_clustering = c.max_local;
  r.mutual_information_ratio = r.edge_count > 0 ? mutual_information_ratio(g) : 0.0;
  return r;
}

LineFit loglog_fit(const Series& series, std::uint32_t kmin) {
  std::vector<double> xs, ys;
  for (auto [k, v] : series) {
    if (k < kmin || k == 0 || v <= 0.0) continue;
    xs.push_back(std::log10(static_cast<double>(k)));
    ys.push_back(std::log10(v));
  }
  if (xs.size() < 2) {
    throw Error(ErrorCode::kDegenerateInput, "fewer than two points to fit");
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LineFit f;
  f.points = xs.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {
      "nodes",           "edges",      "avg_degree",
      "max_degree",      "min_degree", "diameter",
      "effective_diameter", "clustering", "max_local_clustering",
      "mutual_information_ratio"};
  return names;
}

double metric_value(const MetricsReport& r, const std::string& name) {
  if (name == "nodes") return static_cast<double>(r.node_count);
  if (name == "edges") return static_cast<double>(r.edge_count);
  if (name == "avg_degree") return r.avg_degree;
  if (name == "max_degree") return static_cast<double>(r.max_degree);
  if (name == "min_degree") return static_cast<double>(r.min_degree);
  if (name == "diameter") return static_cast<double>(r.diameter);
  if (name == "effective_diameter") return r.effective_diameter;
  if (name == "clustering") return r.clustering_coefficient;
  if (name == "max_local_clustering") return r.max_local_clustering;
  if (name == "mutual_information_ratio") return r.mutual_information_ratio;
  throw Error(ErrorCode::kInvalidConfig, "unknown metric '" + name + "'");
}

Tolerances default_tolerances() {
  return {
      {"nodes", {ToleranceKind::kRelative, 0.03}},
      {"edges", {ToleranceKind::kRelative, 0.03}},
      {"avg_degree", {ToleranceKind::kRelative, 0.10}},
      {"max_degree", {ToleranceKind::kFactor, 1.5}},
      {"mutual_information_ratio", {ToleranceKind::kAbsolute, 0.05}},
      {"max_local_clustering", {ToleranceKind::kExact}},
      {"clustering", {ToleranceKind::kRange, 0.0, 0.03, 0.09}},
      {"effective_diameter", {ToleranceKind::kAbsolute, 0.5}},
  };
}

bool within(const Tolerance& t, double a, double b) {
  switch (t.kind) {
    case ToleranceKind::kRelative:
      return std::abs(a - b) <= t.value * std::abs(b);
    case ToleranceKind::kFactor: {
      const double lo = std::min(a, b);
      const double hi = std::max(a, b);
      return lo > 0.0 ? hi <= t.value * lo : hi == lo;
    }
    case ToleranceKind::kAbsolute:
      return std::abs(a - b) <= t.value;
    case ToleranceKind::kRange:
      return a >= t.lo && a <= t.hi;
    case ToleranceKind::kExact:
      return a == b;
  }
  return false;
}

bool Comparison::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ComparisonRow& r) { return r.pass; });
}

Comparison compare(const MetricsReport& a, const MetricsReport& b,
                   const Tolerances& tolerances) {
  for (const auto& [name, t] : tolerances) metric_value(a, name);
  Comparison out;
  for (const auto& name : metric_names()) {
    const auto it = tolerances.find(name);
    if (it == tolerances.end()) continue;
    ComparisonRow row;
    row.metric = name;
    row.a = metric_value(a, name);
    row.b = metric_value(b, name);
    row.abs_delta = std::abs(row.a - row.b);
    row.rel_delta = row.b != 0.0   ? row.abs_delta / std::abs(row.b)
                    : row.a == 0.0 ? 0.0
                                   : std::numeric_limits<double>::infinity();
    row.tolerance = it->second;
    row.pass = within(it->second, row.a, row.b);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace jellyfish

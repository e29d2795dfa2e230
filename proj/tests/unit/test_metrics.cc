#include <cmath>
#include <map>

#include "doctest.h"
#include "jellyfish/error.h"
#include "jellyfish/metrics.h"
#include "test_support.h"

using namespace jellyfish;

namespace {

// Interpolated 90th percentile straight from the all-pairs matrix.
double oracle_effective_diameter(const AsGraph& g) {
  const auto d = testing::all_pairs(g);
  std::map<int, double> count;
  double total = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (i == j || d[i][j] == testing::kInf) continue;
      count[d[i][j]] += 1;
      total += 1;
    }
  }
  double cum = 0, prev = 0;
  for (auto [h, c] : count) {
    cum += c / total;
    if (cum >= 0.9) return h == 1 ? 1.0 : (h - 1) + (0.9 - prev) / (cum - prev);
    prev = cum;
  }
  return 0;
}

int oracle_diameter(const AsGraph& g) {
  int best = 0;
  for (const auto& row : testing::all_pairs(g)) {
    for (int x : row) {
      if (x != testing::kInf) best = std::max(best, x);
    }
  }
  return best;
}

// Triple loop over an adjacency matrix.
std::vector<double> oracle_local_clustering(const AsGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
  for (const Edge& e : g.edges()) a[e.a][e.b] = a[e.b][e.a] = 1;
  std::vector<double> c(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::size_t> nb;
    for (std::size_t u = 0; u < n; ++u) {
      if (a[v][u]) nb.push_back(u);
    }
    if (nb.size() < 2) continue;
    double links = 0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) links += a[nb[i]][nb[j]];
    }
    c[v] = links / (nb.size() * (nb.size() - 1) / 2.0);
  }
  return c;
}

// Entropy summation over the joint histogram of log2 degree bins.
double oracle_mir(const AsGraph& g) {
  auto bin = [&](NodeId v) {
    int b = 0;
    for (std::size_t k = g.degree(v); k > 1; k /= 2) ++b;
    return b;
  };
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> px;
  double total = 0;
  for (const Edge& e : g.edges()) {
    for (auto [x, y] : {std::pair(bin(e.a), bin(e.b)), std::pair(bin(e.b), bin(e.a))}) {
      joint[{x, y}] += 1;
      px[x] += 1;
      total += 1;
    }
  }
  double h = 0, mi = 0;
  for (auto [x, c] : px) h -= c / total * std::log(c / total);
  for (auto [xy, c] : joint) {
    const double p = c / total;
    mi += p * std::log(p / (px[xy.first] / total * px[xy.second] / total));
  }
  return h > 0 ? mi / h : 1.0;
}

AsGraph disjoint(const AsGraph& a, const AsGraph& b) {
  AsGraph g(a.node_count() + b.node_count());
  for (const Edge& e : a.edges()) g.add_edge(e);
  const auto off = static_cast<NodeId>(a.node_count());
  for (const Edge& e : b.edges()) g.add_edge({e.a + off, e.b + off, e.rel});
  return g;
}

AsGraph complete_bipartite(std::size_t left, std::size_t right) {
  AsGraph g(left + right);
  for (NodeId u = 0; u < left; ++u) {
    for (NodeId v = 0; v < right; ++v) g.add_edge({static_cast<NodeId>(left + v), u, RelType::kCP});
  }
  return g;
}

MetricsReport table_report(double nodes, double edges, double avg, double max, double mir,
                           double local, double clustering) {
  MetricsReport r;
  r.node_count = static_cast<std::size_t>(nodes);
  r.edge_count = static_cast<std::size_t>(edges);
  r.avg_degree = avg;
  r.max_degree = static_cast<std::size_t>(max);
  r.mutual_information_ratio = mir;
  r.max_local_clustering = local;
  r.clustering_coefficient = clustering;
  r.effective_diameter = 5.0;
  return r;
}

}  // namespace

TEST_CASE("degree distributions") {
  CHECK(degree_distribution(testing::clique(9)) == Series{{8, 1.0}});
  const auto star = degree_distribution(testing::star(5));
  REQUIRE(star.size() == 2);
  CHECK(star[0].first == 1);
  CHECK(star[0].second == doctest::Approx(5.0 / 6));
  CHECK(star[1].first == 5);
  CHECK(star[1].second == doctest::Approx(1.0 / 6));
  CHECK_THROWS_AS(degree_distribution(AsGraph{}), Error);
}

TEST_CASE("distribution sums to one and the CCDF falls to zero") {
  const AsGraph g = testing::random_graph(300, 0.02, 8);
  const auto p = degree_distribution(g);
  double sum = 0;
  for (auto [k, v] : p) sum += v;
  CHECK(std::abs(sum - 1.0) < 1e-9);
  const auto c = degree_ccdf(g);
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i].second <= c[i - 1].second);
  CHECK(c.back().second == 0.0);
  // CCDF(k) = sum of P(j) for j > k.
  for (std::size_t i = 0; i < c.size(); ++i) {
    double tail = 0;
    for (std::size_t j = i + 1; j < p.size(); ++j) tail += p[j].second;
    CHECK(c[i].second == doctest::Approx(tail));
  }
}

TEST_CASE("effective diameter") {
  CHECK(distance_summary(testing::clique(6)).effective_diameter == 1.0);
  const AsGraph path = testing::path(11);
  const auto s = distance_summary(path);
  CHECK(s.effective_diameter == doctest::Approx(oracle_effective_diameter(path)));
  CHECK(s.diameter == 10);
  CHECK_FALSE(s.sampled);
  std::uint64_t pairs = 0;
  for (auto h : s.hops) pairs += h;
  CHECK(pairs == 110);
}

TEST_CASE("distance metrics match the all-pairs oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const AsGraph g = testing::random_graph(150, 0.03, seed);
    const auto s = distance_summary(g);
    CHECK(s.diameter == static_cast<std::size_t>(oracle_diameter(g)));
    CHECK(s.effective_diameter == doctest::Approx(oracle_effective_diameter(g)));
    CHECK(s.effective_diameter <= s.diameter);
  }
}

TEST_CASE("sampled distances are flagged and reproducible") {
  const AsGraph g = testing::random_graph(2500, 0.002, 4);
  const auto a = distance_summary(g, 9);
  const auto b = distance_summary(g, 9);
  CHECK(a.sampled);
  CHECK(a.effective_diameter == b.effective_diameter);
  CHECK(a.hops == b.hops);
}

TEST_CASE("clustering") {
  const auto tri = clustering(testing::clique(3));
  CHECK(tri.average == 1.0);
  CHECK(tri.max_local == 1.0);
  CHECK(clustering(testing::star(6)).average == 0.0);
  for (std::uint64_t seed : {5u, 6u}) {
    const AsGraph g = testing::random_graph(120, 0.08, seed);
    const auto got = local_clustering(g);
    const auto want = oracle_local_clustering(g);
    for (std::size_t v = 0; v < got.size(); ++v) CHECK(got[v] == doctest::Approx(want[v]));
  }
}

TEST_CASE("mutual information ratio") {
  // Triangle (degree 2) beside a 5-clique (degree 4): every edge joins equal
  // bins, so knowing one end fixes the other.
  CHECK(mutual_information_ratio(disjoint(testing::clique(3), testing::clique(5))) ==
        doctest::Approx(1.0));
  const AsGraph mixed = disjoint(complete_bipartite(3, 7), testing::path(6));
  CHECK(mutual_information_ratio(mixed) == doctest::Approx(oracle_mir(mixed)));
  const AsGraph rnd = testing::random_graph(200, 0.04, 3);
  CHECK(mutual_information_ratio(rnd) == doctest::Approx(oracle_mir(rnd)));
  CHECK_THROWS_AS(mutual_information_ratio(AsGraph(3)), Error);
}

TEST_CASE("report invariants") {
  const AsGraph g = testing::random_graph(200, 0.03, 12);
  const auto r = compute_metrics(g);
  CHECK(r.avg_degree == 2.0 * g.edge_count() / g.node_count());
  CHECK(r.min_degree <= r.avg_degree);
  CHECK(r.avg_degree <= r.max_degree);
  CHECK(r.effective_diameter <= r.diameter);
}

TEST_CASE("log-log fit") {
  const Series exact{{1, 1.0}, {10, 0.01}, {100, 0.0001}};
  const auto f = loglog_fit(exact);
  CHECK(f.slope == doctest::Approx(-2.0));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(loglog_fit(exact, 10).points == 2);
  CHECK_THROWS_AS(loglog_fit(Series{{3, 0.5}}), Error);
}

TEST_CASE("comparison") {
  const auto ours = table_report(19422, 59806, 6.1, 2521, 0.96, 1, 0.052);
  const auto source = table_report(19936, 59508, 5.9, 2430, 0.95, 1, 0.061);
  SUBCASE("a report against itself") {
    const auto c = compare(source, source);
    CHECK(c.pass());
    for (const auto& row : c.rows) CHECK(row.abs_delta == 0.0);
  }
  SUBCASE("the published columns pass the default tolerances") {
    const auto c = compare(ours, source);
    CHECK(c.rows.size() == default_tolerances().size());
    CHECK(c.pass());
  }
  SUBCASE("6.1 vs 5.9 at 5% relative") {
    const Tolerances t{{"avg_degree", {ToleranceKind::kRelative, 0.05}}};
    const auto c = compare(ours, source, t);
    REQUIRE(c.rows.size() == 1);
    CHECK(c.rows[0].rel_delta == doctest::Approx(0.2 / 5.9));
    CHECK(c.pass());
  }
  SUBCASE("failures are reported per row") {
    auto worse = ours;
    worse.max_degree = 5000;
    worse.clustering_coefficient = 0.2;
    const auto c = compare(worse, source);
    CHECK_FALSE(c.pass());
    std::size_t failed = 0;
    for (const auto& row : c.rows) failed += !row.pass;
    CHECK(failed == 2);
  }
  CHECK_THROWS_AS(compare(ours, source, {{"bogus", {}}}), Error);
}

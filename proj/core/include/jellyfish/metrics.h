#ifndef JELLYFISH_METRICS_H_
#define JELLYFISH_METRICS_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "jellyfish/graph.h"
#include "jellyfish/random.h"

namespace jellyfish {

// (k, value) points in ascending k.
using Series = std::vector<std::pair<std::uint32_t, double>>;

// All metrics read the graph as undirected.
struct MetricsReport {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  double avg_degree = 0.0;
  std::size_t max_degree = 0;
  std::size_t min_degree = 0;
  Series degree_distribution;
  Series degree_ccdf;
  std::size_t diameter = 0;
  bool diameter_sampled = false;
  double effective_diameter = 0.0;
  bool effective_diameter_sampled = false;
  double clustering_coefficient = 0.0;
  double max_local_clustering = 0.0;
  double mutual_information_ratio = 0.0;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// Above this many nodes the distance metrics use sampled BFS sources.
inline constexpr std::size_t kExactDistanceLimit = 2000;
inline constexpr std::size_t kDistanceSources = 1000;
inline constexpr double kEffectiveQuantile = 0.9;

// P(k) = n_k / |V| for every k with n_k > 0. Throws Error{kEmptyGraph}.
Series degree_distribution(const AsGraph& g);
// P(deg > k) at every k present in the graph.
Series degree_ccdf(const AsGraph& g);

struct DistanceSummary {
  std::size_t diameter = 0;
  double effective_diameter = 0.0;
  bool sampled = false;
  // hops[d] = ordered connected pairs at distance d (hops[0] unused).
  std::vector<std::uint64_t> hops;
};

// Exact on graphs up to kExactDistanceLimit nodes, otherwise BFS from
// kDistanceSources sources drawn with `seed`. The effective diameter is the
// 90th percentile of connected-pair distances, interpolated linearly between
// the bracketing hop counts; it is 1 when distance 1 already covers 90%.
// Throws Error{kEmptyGraph}.
DistanceSummary distance_summary(const AsGraph& g, std::uint64_t seed = kDefaultSeed);

// Interpolated 90th percentile of a hop histogram as described above.
double effective_diameter_from_hops(std::span<const std::uint64_t> hops);

struct ClusteringSummary {
  double average = 0.0;
  double max_local = 0.0;
};

// Local clustering is 0 for degree below 2. Throws Error{kEmptyGraph}.
ClusteringSummary clustering(const AsGraph& g);
std::vector<double> local_clustering(const AsGraph& g);

// Endpoint degrees binned by floor(log2 k), joint histogram over both
// orientations of every edge; I(X;Y) / H(X), and 1 when H(X) = 0.
// Throws Error{kNoEdges}.
double mutual_information_ratio(const AsGraph& g);

MetricsReport compute_metrics(const AsGraph& g, std::uint64_t seed = kDefaultSeed);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares of log10 value on log10 k over points with
// k >= kmin and value > 0. Throws Error{kDegenerateInput} with fewer than two
// distinct k.
LineFit loglog_fit(const Series& series, std::uint32_t kmin = 1);

enum class ToleranceKind { kRelative, kFactor, kAbsolute, kRange, kExact };

// kRelative: |a - b| <= value * |b|. kFactor: max(a,b) <= value * min(a,b).
// kAbsolute: |a - b| <= value. kRange: lo <= a <= hi. kExact: a == b.
struct Tolerance {
  ToleranceKind kind = ToleranceKind::kExact;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Tolerance&, const Tolerance&) = default;
};

using Tolerances = std::map<std::string, Tolerance>;

// Names accepted in a tolerance set.
const std::vector<std::string>& metric_names();
double metric_value(const MetricsReport& r, const std::string& name);

// node/edge counts 3%, average degree 10%, max degree factor 1.5, MIR 0.05,
// max local clustering exact, clustering in [0.03, 0.09], effective diameter 0.5.
Tolerances default_tolerances();

struct ComparisonRow {
  std::string metric;
  double a = 0.0;
  double b = 0.0;
  double abs_delta = 0.0;
  double rel_delta = 0.0;  // against b; infinite when only b is 0
  Tolerance tolerance;
  bool pass = false;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  bool pass() const;
};

bool within(const Tolerance& t, double a, double b);

// One row per metric in `tolerances`, in metric_names() order.
// Throws Error{kInvalidConfig} on an unknown metric name.
Comparison compare(const MetricsReport& a, const MetricsReport& b,
                   const Tolerances& tolerances = default_tolerances());

}  // namespace jellyfish

#endif  // JELLYFISH_METRICS_H_

#ifndef JELLYFISH_PROFILE_H_
#define JELLYFISH_PROFILE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "jellyfish/decomposition.h"
#include "jellyfish/graph.h"

namespace jellyfish {

// Per-node incident edge count limits for one ring, by relationship type.
// CP counts include both directions and hanger edges.
struct DegreeBounds {
  std::uint32_t p2p_min = 0;
  std::uint32_t p2p_max = 0;
  std::uint32_t cp_min = 0;
  std::uint32_t cp_max = 0;

  friend bool operator==(const DegreeBounds&, const DegreeBounds&) = default;
};

struct RingStats {
  std::size_t node_count = 0;
  double node_fraction = 0.0;
  std::size_t p2p_intra = 0;
  std::size_t cp_intra = 0;
  // Absent when the intra-ring P2P degrees are too few to fit.
  std::optional<double> p2p_powerlaw_exponent;
  // Exponent alpha of the (1 + degree)^alpha attachment kernel.
  double rgr_coefficient = 1.0;
  DegreeBounds bounds;

  friend bool operator==(const RingStats&, const RingStats&) = default;
};

struct BridgeStats {
  int r = 0;
  int s = 1;
  std::size_t p2p_count = 0;
  std::size_t cp_count = 0;

  friend bool operator==(const BridgeStats&, const BridgeStats&) = default;
};

struct HangerStats {
  int origin_ring = 0;
  std::size_t node_count = 0;
  double node_fraction = 0.0;

  friend bool operator==(const HangerStats&, const HangerStats&) = default;
};

// Everything the generator needs to rebuild a graph of the same shape.
struct JellyfishProfile {
  std::size_t total_nodes = 0;
  std::size_t total_edges = 0;
  std::size_t core_size = 0;
  std::vector<RingStats> rings;  // rings[0] is the core
  std::vector<BridgeStats> bridges;
  std::vector<HangerStats> hangers;
  // Ring nodes (core included) by number of providers, as node fractions.
  std::map<std::uint32_t, double> provider_count_histogram;

  friend bool operator==(const JellyfishProfile&, const JellyfishProfile&) = default;

  int ring_count() const { return rings.empty() ? 0 : static_cast<int>(rings.size()) - 1; }
  const BridgeStats* bridge(int r, int s) const;
  const HangerStats* hanger(int origin_ring) const;
};

// Tolerance on the node-fraction sum; covers debris excluded from the
// decomposition.
inline constexpr double kFractionSumTolerance = 0.005;

// Throws Error{kInfeasibleProfile} naming the first violated invariant.
void check_profile(const JellyfishProfile& p);

JellyfishProfile extract_profile(const AsGraph& g, const Decomposition& d);

// Magnitude of the slope of a least-squares line through
// (log k, log n_k) over non-empty bins, each bin weighted by its count n_k.
// Throws Error{kDegenerateInput} with fewer than two distinct degrees or any
// degree below 1.
double fit_powerlaw_exponent(std::span<const std::uint32_t> degrees);

// Grid of kernel exponents searched by fit_rgr_coefficient.
inline constexpr double kRgrGridMax = 4.0;
inline constexpr double kRgrGridStep = 0.1;

// Attach sum(cp_degrees) stubs one at a time to cp_degrees.size() nodes with
// probability proportional to (1 + current degree)^alpha.
std::vector<std::uint32_t> simulate_attachment(std::size_t nodes,
                                               std::size_t stubs, double alpha,
                                               std::uint64_t seed);

// Kolmogorov-Smirnov distance between the empirical degree distributions.
double ks_distance(std::span<const std::uint32_t> a,
                   std::span<const std::uint32_t> b);

// Grid-searched alpha whose simulated attachment best matches the observed
// per-node CP degrees (smallest KS distance, ties to the smaller alpha).
// Throws Error{kDegenerateInput} with fewer than two nodes carrying CP edges.
double fit_rgr_coefficient(std::span<const std::uint32_t> cp_degrees);
double fit_rgr_coefficient(const AsGraph& g, const Decomposition& d, int ring);

}  // namespace jellyfish

#endif  // JELLYFISH_PROFILE_H_

#ifndef JELLYFISH_GENERATOR_H_
#define JELLYFISH_GENERATOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jellyfish/decomposition.h"
#include "jellyfish/graph.h"
#include "jellyfish/profile.h"
#include "jellyfish/random.h"

namespace jellyfish {

struct GeneratorConfig {
  std::size_t target_nodes = 0;
  std::uint64_t seed = kDefaultSeed;
  // Probability that a CP customer draw is restricted to nodes with exactly
  // one provider, while the two-provider share is below the profile's.
  double bias_strength = 0.5;
  std::uint32_t max_retries_per_edge = 100;
  RelType hanger_relation = RelType::kCP;
};

struct PhaseReport {
  std::string phase;
  std::size_t target = 0;
  std::size_t placed = 0;
  std::size_t retries = 0;
  std::size_t quota_reductions = 0;
};

struct GenerationReport {
  std::vector<PhaseReport> phases;
  std::size_t repair_edges = 0;
  std::size_t promotions = 0;
  // Repair edges that took a node past its cp_max.
  std::size_t bound_exemptions = 0;
  std::size_t dropped_stubs = 0;
  std::vector<std::string> log;

  std::size_t quota_reductions() const;
};

struct GenerationResult {
  AsGraph graph;
  // Construction-time layout, not a fresh decomposition of `graph`.
  Decomposition decomposition;
  GenerationReport report;
};

// Throws Error{kInvalidConfig}.
void check_config(const JellyfishProfile& profile, const GeneratorConfig& cfg);

// The full pipeline: core, ring population, intra-ring P2P, bridge P2P,
// intra-ring CP, bridge CP, connectivity repair, hangers, CP minimum fill.
// Throws Error{kInfeasibleProfile, kInvalidConfig, kInfeasibleQuota}.
GenerationResult generate(const JellyfishProfile& profile, const GeneratorConfig& cfg);

// A P2P clique on nodes 0..core_size-1.
AsGraph build_core(std::size_t core_size);

// Banker's rounding of each scale * base, then the residual against `total`
// is absorbed by the largest quota.
std::vector<std::size_t> apportion(std::span<const double> base, double scale,
                                   std::size_t total);

// Per-node degree targets summing to 2 * edges: `nodes` slots, degrees drawn
// from k^-exponent truncated to [kmin, kmax], where kmin is the smallest
// lower cut that lets the ring carry the quota. Non-participants get 0.
std::vector<std::uint32_t> powerlaw_degree_sequence(std::size_t nodes,
                                                    std::size_t edges,
                                                    double exponent,
                                                    std::uint32_t kmax, Rng& rng);

// Sampling exponent whose degree sequence re-fits to `target` under
// fit_powerlaw_exponent; compensates the fit's small-sample bias.
double calibrate_sampling_exponent(std::size_t nodes, std::size_t edges,
                                   double target, std::uint32_t kmax);

// Connects every component to the one holding the core with CP edges from a
// node in the fragment's lowest ring to a uniformly chosen provider one ring
// further in (falling back inward, down to the core, whose cp_max is waived).
struct RepairOutcome {
  std::vector<Edge> added;
  std::size_t exemptions = 0;
};
RepairOutcome repair_connectivity(AsGraph& g, std::span<const int> ring_of,
                                  const JellyfishProfile& profile, Rng& rng);

// True iff adding customer->provider would close a CP cycle, i.e. `customer`
// is already reachable from `provider` along provider links.
bool creates_cp_cycle(const AsGraph& g, NodeId customer, NodeId provider);

// Step-wise access to the generation phases. generate() runs them in order.
class Generator {
 public:
  Generator(const JellyfishProfile& profile, const GeneratorConfig& cfg);

  void build_core();
  void populate_rings();
  std::size_t place_intra_ring_p2p(int ring);
  std::size_t place_bridge_p2p(const BridgeStats& bridge);
  std::size_t place_intra_ring_cp(int ring);
  std::size_t place_bridge_cp(const BridgeStats& bridge);
  // Intra-ring CP for every ring, then every bridge.
  std::size_t place_cp_edges();
  std::size_t repair_connectivity();
  std::size_t place_hangers();
  // One extra CP edge to the next ring in for each node still below its CP
  // minimum. Every addition is logged.
  std::size_t fill_cp_minimums();

  GenerationResult finish() &&;

  double scale() const { return scale_; }
  const AsGraph& graph() const { return graph_; }
  std::span<const int> ring_of() const { return ring_of_; }
  const GenerationReport& report() const { return report_; }

  std::size_t ring_quota(int r) const { return ring_nodes_[r]; }
  std::size_t hanger_quota(int r) const { return hanger_nodes_[r]; }
  std::size_t intra_p2p_quota(int r) const { return intra_p2p_[r]; }
  std::size_t intra_cp_quota(int r) const { return intra_cp_[r]; }
  std::size_t bridge_p2p_quota(const BridgeStats& b) const;
  std::size_t bridge_cp_quota(const BridgeStats& b) const;

 private:
  class Picker;

  const RingStats& stats(int r) const { return profile_.rings[r]; }
  bool p2p_room(NodeId v) const;
  bool cp_room(NodeId v) const;
  double kernel(NodeId v, std::size_t degree) const;
  bool below_min_p2p(NodeId v) const;
  bool below_min_cp(NodeId v) const;
  bool needs_degree(NodeId v) const;
  bool bias_active();
  void add_p2p(NodeId u, NodeId v);
  void add_cp(NodeId customer, NodeId provider);
  void note_edge(NodeId u, NodeId v);
  NodeId new_node(int ring);
  bool would_cycle(NodeId customer, NodeId provider);
  bool valid_p2p(NodeId u, NodeId v) const;
  void promote(NodeId v, int ring);
  std::size_t place_cp_quota(PhaseReport& phase, int provider_ring,
                             int customer_ring, std::size_t quota);
  std::size_t place_p2p_quota(PhaseReport& phase, int ring_a, int ring_b,
                              std::size_t quota);
  std::size_t top_up_intra_p2p(int ring, std::size_t missing, PhaseReport& phase);
  void check_quotas() const;

  JellyfishProfile profile_;
  GeneratorConfig cfg_;
  Rng rng_;
  double scale_ = 1.0;

  AsGraph graph_;
  std::vector<int> ring_of_;
  std::vector<int> hanger_origin_;
  std::vector<std::vector<NodeId>> members_;
  std::vector<char> uplink_;    // has a neighbour one ring further in
  std::vector<char> gateway_;   // has a neighbour two or more rings further in
  std::vector<std::uint32_t> core_peers_;
  std::vector<std::uint32_t> visit_stamp_;
  std::uint32_t visit_epoch_ = 0;
  std::vector<NodeId> dfs_stack_;
  std::size_t ring_node_total_ = 0;
  std::size_t two_provider_nodes_ = 0;
  double two_provider_target_ = 0.0;

  std::vector<std::size_t> ring_nodes_;
  std::vector<std::size_t> hanger_nodes_;
  std::vector<std::size_t> intra_p2p_;
  std::vector<std::size_t> intra_cp_;
  std::vector<std::size_t> bridge_p2p_;  // parallel to profile_.bridges
  std::vector<std::size_t> bridge_cp_;

  GenerationReport report_;
};

}  // namespace jellyfish

#endif  // JELLYFISH_GENERATOR_H_

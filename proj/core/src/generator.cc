#include "jellyfish/generator.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <utility>

#include "jellyfish/error.h"

namespace jellyfish {
namespace {

constexpr std::uint64_t kCalibrationSeed = 0x63616c6962ULL;
constexpr int kCalibrationReps = 3;
constexpr int kCalibrationSteps = 20;
constexpr double kCalibrationLo = 1.2;
constexpr double kCalibrationHi = 6.0;
// Below this many stubs the fit is noise; sample at the target directly.
constexpr std::size_t kCalibrationMinStubs = 60;
constexpr std::uint32_t kProviderRedrawEvery = 10;
constexpr std::uint32_t kShrinkBoundFloor = 20;

std::size_t round_even(double x) {
  return x <= 0.0 ? 0 : static_cast<std::size_t>(std::nearbyint(x));
}

std::string bridge_name(const BridgeStats& b) {
  return std::to_string(b.r) + "-" + std::to_string(b.s);
}

}  // namespace

std::size_t GenerationReport::quota_reductions() const {
  std::size_t n = 0;
  for (const auto& p : phases) n += p.quota_reductions;
  return n;
}

void check_config(const JellyfishProfile& profile, const GeneratorConfig& cfg) {
  std::size_t nonempty = 0;
  for (std::size_t r = 1; r < profile.rings.size(); ++r) {
    if (profile.rings[r].node_fraction > 0.0) ++nonempty;
  }
  const std::size_t floor = profile.core_size + nonempty;
  if (cfg.target_nodes < floor) {
    throw Error(ErrorCode::kInvalidConfig,
                "target_nodes " + std::to_string(cfg.target_nodes) +
                    " below core size plus nonempty rings (" +
                    std::to_string(floor) + ")");
  }
  if (!(cfg.bias_strength >= 0.0 && cfg.bias_strength <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "bias_strength outside [0, 1]");
  }
  if (cfg.max_retries_per_edge < 1) {
    throw Error(ErrorCode::kInvalidConfig, "max_retries_per_edge must be >= 1");
  }
}

AsGraph build_core(std::size_t core_size) {
  AsGraph g(core_size);
  for (NodeId u = 0; u < core_size; ++u) {
    for (NodeId v = u + 1; v < core_size; ++v) g.add_edge({u, v, RelType::kP2P});
  }
  return g;
}

std::vector<std::size_t> apportion(std::span<const double> base, double scale,
                                   std::size_t total) {
  std::vector<std::size_t> q(base.size());
  long long sum = 0;
  for (std::size_t i = 0; i < base.size(); ++i) {
    q[i] = round_even(scale * base[i]);
    sum += static_cast<long long>(q[i]);
  }
  long long residual = static_cast<long long>(total) - sum;
  while (residual != 0 && !q.empty()) {
    const auto best = static_cast<std::size_t>(
        std::max_element(q.begin(), q.end()) - q.begin());
    if (residual > 0) {
      q[best] += static_cast<std::size_t>(residual);
      residual = 0;
    } else {
      const auto take = std::min<long long>(static_cast<long long>(q[best]), -residual);
      if (take == 0) break;
      q[best] -= static_cast<std::size_t>(take);
      residual += take;
    }
  }
  return q;
}

std::vector<std::uint32_t> powerlaw_degree_sequence(std::size_t nodes,
                                                    std::size_t edges,
                                                    double exponent,
                                                    std::uint32_t kmax, Rng& rng) {
  std::vector<std::uint32_t> deg(nodes, 0);
  if (edges == 0) return deg;
  if (nodes < 2) {
    throw Error(ErrorCode::kInfeasibleQuota, "edges requested on fewer than 2 nodes");
  }
  kmax = static_cast<std::uint32_t>(std::min<std::size_t>(kmax, nodes - 1));
  const std::size_t stubs = 2 * edges;
  if (kmax == 0 || stubs > nodes * static_cast<std::size_t>(kmax)) {
    throw Error(ErrorCode::kInfeasibleQuota,
                std::to_string(edges) + " edges exceed " + std::to_string(nodes) +
                    " nodes at degree cap " + std::to_string(kmax));
  }

  // Suffix sums of k^-exponent and k^(1-exponent) give the mean degree of the
  // law truncated to [kmin, kmax] for every kmin in O(1).
  std::vector<double> w(kmax + 2, 0.0), sw(kmax + 2, 0.0), skw(kmax + 2, 0.0);
  for (std::uint32_t k = kmax; k >= 1; --k) {
    w[k] = std::pow(static_cast<double>(k), -exponent);
    sw[k] = sw[k + 1] + w[k];
    skw[k] = skw[k + 1] + k * w[k];
  }
  std::uint32_t kmin = 1;
  while (kmin < kmax &&
         static_cast<double>(nodes) * skw[kmin] / sw[kmin] < static_cast<double>(stubs)) {
    ++kmin;
  }
  const double mean = skw[kmin] / sw[kmin];
  const auto m = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(static_cast<double>(stubs) / mean)), 1, nodes);

  std::vector<double> cdf;
  cdf.reserve(kmax - kmin + 1);
  double acc = 0.0;
  for (std::uint32_t k = kmin; k <= kmax; ++k) cdf.push_back(acc += w[k]);

  std::vector<NodeId> order(nodes);
  std::iota(order.begin(), order.end(), NodeId{0});
  shuffle(order, rng);

  std::size_t used = m;
  std::vector<std::uint32_t> d(nodes, 0);  // indexed by position in `order`
  std::size_t sum = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double u = uniform01(rng) * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto k = kmin + static_cast<std::uint32_t>(
                              std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                       static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    d[i] = k;
    sum += k;
  }

  // Move the sum onto 2 * edges with degree-proportional unit steps, which
  // keeps the shape of the tail.
  if (sum < stubs) {
    WeightedSampler s(nodes);
    for (std::size_t i = 0; i < used; ++i) s.set(i, d[i] < kmax ? d[i] : 0.0);
    while (sum < stubs) {
      std::size_t i = s.sample(rng);
      if (i == s.size()) {
        if (used == nodes) break;
        i = used++;
        d[i] = 0;
      }
      ++d[i];
      ++sum;
      s.set(i, d[i] < kmax ? d[i] : 0.0);
    }
  } else if (sum > stubs) {
    WeightedSampler s(nodes);
    for (std::size_t i = 0; i < used; ++i) s.set(i, d[i] > kmin ? d[i] : 0.0);
    while (sum > stubs) {
      std::size_t i = s.sample(rng);
      if (i == s.size()) {
        // Everyone sits at kmin: retire participants from the back.
        i = used - 1;
        const std::uint32_t cut = static_cast<std::uint32_t>(std::min<std::size_t>(d[i], sum - stubs));
        d[i] -= cut;
        sum -= cut;
        if (d[i] == 0) --used;
        continue;
      }
      --d[i];
      --sum;
      s.set(i, d[i] > kmin ? d[i] : 0.0);
    }
  }
  for (std::size_t i = 0; i < nodes; ++i) deg[order[i]] = d[i];
  return deg;
}

double calibrate_sampling_exponent(std::size_t nodes, std::size_t edges,
                                   double target, std::uint32_t kmax) {
  if (2 * edges < kCalibrationMinStubs) return target;
  auto fit_at = [&](double gamma) -> std::optional<double> {
    double total = 0.0;
    int ok = 0;
    for (int rep = 0; rep < kCalibrationReps; ++rep) {
      Rng rng(kCalibrationSeed + static_cast<std::uint64_t>(rep));
      auto d = powerlaw_degree_sequence(nodes, edges, gamma, kmax, rng);
      std::erase(d, 0u);
      try {
        total += fit_powerlaw_exponent(d);
        ++ok;
      } catch (const Error&) {
      }
    }
    if (ok == 0) return std::nullopt;
    return total / ok;
  };
  double lo = kCalibrationLo;
  double hi = kCalibrationHi;
  const auto flo = fit_at(lo);
  const auto fhi = fit_at(hi);
  if (!flo || !fhi) return target;
  if (target <= *flo) return lo;
  if (target >= *fhi) return hi;
  for (int i = 0; i < kCalibrationSteps; ++i) {
    const double mid = 0.5 * (lo + hi);
    const auto f = fit_at(mid);
    if (!f) break;
    (*f < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool creates_cp_cycle(const AsGraph& g, NodeId customer, NodeId provider) {
  if (customer == provider) return true;
  std::vector<char> seen(g.node_count(), 0);
  std::vector<NodeId> stack{provider};
  seen[provider] = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId p : g.providers(v)) {
      if (p == customer) return true;
      if (!seen[p]) {
        seen[p] = 1;
        stack.push_back(p);
      }
    }
  }
  return false;
}

RepairOutcome repair_connectivity(AsGraph& g, std::span<const int> ring_of,
                                  const JellyfishProfile& profile, Rng& rng) {
  RepairOutcome out;
  const auto comps = connected_components(g);
  if (comps.size() <= 1) return out;

  const std::size_t n = g.node_count();
  std::vector<std::size_t> comp_of(n);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (NodeId v : comps[i]) comp_of[v] = i;
  }
  std::size_t main = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (ring_of[v] == 0) {
      main = comp_of[v];
      break;
    }
  }
  std::vector<char> in_main(n, 0);
  for (NodeId v : comps[main]) in_main[v] = 1;

  const int top = profile.ring_count();
  auto cp_max = [&](int r) -> std::size_t {
    return r >= 0 && r <= top ? profile.rings[r].bounds.cp_max
                              : std::numeric_limits<std::size_t>::max();
  };
  auto ring = [&](NodeId v) { return ring_of[v] == kNoRing ? top + 1 : ring_of[v]; };

  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (i == main) continue;
    const auto& frag = comps[i];
    int low = std::numeric_limits<int>::max();
    for (NodeId v : frag) low = std::min(low, ring(v));

    std::vector<NodeId> customers;
    for (NodeId v : frag) {
      if (ring(v) == low && g.cp_degree(v) < cp_max(low)) customers.push_back(v);
    }
    if (customers.empty()) {
      for (NodeId v : frag) {
        if (ring(v) == low) customers.push_back(v);
      }
    }
    const NodeId c = customers[uniform_index(rng, customers.size())];

    std::optional<NodeId> p;
    for (int target = std::min(low - 1, top); target >= 0 && !p; --target) {
      std::vector<NodeId> cands;
      for (NodeId v = 0; v < n; ++v) {
        if (in_main[v] && ring_of[v] == target && g.cp_degree(v) < cp_max(target)) {
          cands.push_back(v);
        }
      }
      if (cands.empty() && target == 0) {
        for (NodeId v = 0; v < n; ++v) {
          if (ring_of[v] == 0) cands.push_back(v);
        }
      }
      if (!cands.empty()) p = cands[uniform_index(rng, cands.size())];
    }
    if (!p) {
      // Fragment holds ring-0 nodes only when there is no core; nothing to do.
      continue;
    }
    const Edge e{c, *p, RelType::kCP};
    g.add_edge(e);
    out.added.push_back(e);
    if (g.cp_degree(*p) > cp_max(ring(*p))) ++out.exemptions;
    if (g.cp_degree(c) > cp_max(ring(c))) ++out.exemptions;
    for (NodeId v : frag) in_main[v] = 1;
  }
  return out;
}

GenerationResult generate(const JellyfishProfile& profile, const GeneratorConfig& cfg) {
  Generator gen(profile, cfg);
  gen.build_core();
  gen.populate_rings();
  const int top = profile.ring_count();
  for (int r = 1; r <= top; ++r) gen.place_intra_ring_p2p(r);
  for (const auto& b : profile.bridges) gen.place_bridge_p2p(b);
  gen.place_cp_edges();
  gen.repair_connectivity();
  gen.place_hangers();
  gen.fill_cp_minimums();
  return std::move(gen).finish();
}

// Weighted draws over a fixed node list with priority tiers: a draw takes the
// first enabled tier holding any eligible node, else any eligible node.
// Weight 0 marks a node ineligible (for instance, at its degree cap).
class Generator::Picker {
 public:
  using Weight = std::function<double(NodeId)>;
  using Tier = std::function<bool(NodeId)>;
  static constexpr unsigned kAllTiers = ~0u;

  Picker(std::span<const NodeId> nodes, Weight weight, std::vector<Tier> tiers,
         std::size_t graph_nodes)
      : nodes_(nodes.begin(), nodes.end()),
        weight_(std::move(weight)),
        tiers_(std::move(tiers)),
        samplers_(tiers_.size() + 1, WeightedSampler(nodes_.size())),
        index_(graph_nodes, kAbsent) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      index_[nodes_[i]] = i;
      update(i);
    }
  }

  void refresh(NodeId v) {
    if (v < index_.size() && index_[v] != kAbsent) update(index_[v]);
  }

  std::optional<NodeId> pick(Rng& rng, unsigned mask = kAllTiers) const {
    for (std::size_t t = 0; t < tiers_.size(); ++t) {
      if ((mask >> t & 1u) && samplers_[t].any()) return nodes_[samplers_[t].sample(rng)];
    }
    if (samplers_.back().any()) return nodes_[samplers_.back().sample(rng)];
    return std::nullopt;
  }

  // Deterministic scan in tier order for the first eligible node passing `ok`.
  template <typename Fn>
  std::optional<NodeId> find(Fn&& ok, unsigned mask = kAllTiers) const {
    for (std::size_t t = 0; t <= tiers_.size(); ++t) {
      if (t < tiers_.size() && !(mask >> t & 1u)) continue;
      const auto& s = samplers_[t];
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (s.weight(i) > 0.0 && ok(nodes_[i])) return nodes_[i];
      }
    }
    return std::nullopt;
  }

 private:
  static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

  void update(std::size_t i) {
    const NodeId v = nodes_[i];
    const double w = weight_(v);
    for (std::size_t t = 0; t < tiers_.size(); ++t) {
      samplers_[t].set(i, w > 0.0 && tiers_[t](v) ? w : 0.0);
    }
    samplers_.back().set(i, w > 0.0 ? w : 0.0);
  }

  std::vector<NodeId> nodes_;
  Weight weight_;
  std::vector<Tier> tiers_;
  std::vector<WeightedSampler> samplers_;
  std::vector<std::size_t> index_;
};

Generator::Generator(const JellyfishProfile& profile, const GeneratorConfig& cfg)
    : profile_(profile), cfg_(cfg), rng_(cfg.seed) {
  check_profile(profile_);
  check_config(profile_, cfg_);
  std::sort(profile_.bridges.begin(), profile_.bridges.end(),
            [](const BridgeStats& x, const BridgeStats& y) {
              return std::pair(x.r, x.s) < std::pair(y.r, y.s);
            });
  scale_ = static_cast<double>(cfg_.target_nodes) / static_cast<double>(profile_.total_nodes);
  // Shrinking: per-node limits follow the edge budget down, otherwise the
  // ring hubs keep full-size degrees and outgrow a shrunken core.
  if (scale_ < 1.0) {
    auto down = [&](std::uint32_t x) {
      return static_cast<std::uint32_t>(std::floor(x * scale_));
    };
    // Small limits are left alone so thin outer rings keep room for hangers.
    auto up = [&](std::uint32_t x) {
      return std::max(static_cast<std::uint32_t>(std::ceil(x * scale_)),
                      std::min(x, kShrinkBoundFloor));
    };
    for (auto& st : profile_.rings) {
      auto& b = st.bounds;
      b = {down(b.p2p_min), std::max(down(b.p2p_min), up(b.p2p_max)), down(b.cp_min),
           std::max(down(b.cp_min), up(b.cp_max))};
    }
  }

  const int top = profile_.ring_count();
  const std::size_t rings = static_cast<std::size_t>(top) + 1;

  // Node quotas: rings 1.. then hangers of rings 0.., sharing what the core
  // leaves of target_nodes.
  std::vector<double> base;
  for (int r = 1; r <= top; ++r) base.push_back(stats(r).node_fraction * profile_.total_nodes);
  for (int r = 0; r <= top; ++r) {
    const HangerStats* h = profile_.hanger(r);
    base.push_back(h ? h->node_fraction * profile_.total_nodes : 0.0);
  }
  auto q = apportion(base, scale_, cfg_.target_nodes - profile_.core_size);
  for (int r = 1; r <= top; ++r) {
    auto& qr = q[r - 1];
    if (stats(r).node_fraction > 0.0 && qr == 0) {
      auto big = std::max_element(q.begin(), q.end());
      --*big;
      qr = 1;
    }
  }
  ring_nodes_.assign(rings, 0);
  hanger_nodes_.assign(rings, 0);
  ring_nodes_[0] = profile_.core_size;
  for (int r = 1; r <= top; ++r) ring_nodes_[r] = q[r - 1];
  for (int r = 0; r <= top; ++r) hanger_nodes_[r] = q[top + r];

  // Edge quotas share one rounded total so they add up across rings/bridges.
  std::vector<double> ebase;
  double esum = 0.0;
  for (int r = 1; r <= top; ++r) ebase.push_back(static_cast<double>(stats(r).p2p_intra));
  for (int r = 1; r <= top; ++r) ebase.push_back(static_cast<double>(stats(r).cp_intra));
  for (const auto& b : profile_.bridges) ebase.push_back(static_cast<double>(b.p2p_count));
  for (const auto& b : profile_.bridges) ebase.push_back(static_cast<double>(b.cp_count));
  for (double x : ebase) esum += x;
  const auto eq = apportion(ebase, scale_, round_even(scale_ * esum));
  const std::size_t nb = profile_.bridges.size();
  intra_p2p_.assign(rings, 0);
  intra_cp_.assign(rings, 0);
  intra_p2p_[0] = profile_.core_size * (profile_.core_size - (profile_.core_size ? 1 : 0)) / 2;
  for (int r = 1; r <= top; ++r) {
    intra_p2p_[r] = eq[r - 1];
    intra_cp_[r] = eq[top + r - 1];
  }
  bridge_p2p_.assign(eq.begin() + 2 * top, eq.begin() + 2 * top + nb);
  bridge_cp_.assign(eq.begin() + 2 * top + nb, eq.end());

  if (auto it = profile_.provider_count_histogram.find(2);
      it != profile_.provider_count_histogram.end()) {
    two_provider_target_ = it->second;
  }
  ring_node_total_ = std::accumulate(ring_nodes_.begin(), ring_nodes_.end(), std::size_t{0});
  members_.assign(rings, {});
  check_quotas();
}

void Generator::check_quotas() const {
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kInfeasibleProfile, what);
  };
  const int top = profile_.ring_count();
  for (int r = 1; r <= top; ++r) {
    const std::size_t n = ring_nodes_[r];
    const auto& b = stats(r).bounds;
    const std::size_t pair_cap = n * (n ? n - 1 : 0) / 2;
    if (intra_p2p_[r] > pair_cap ||
        2 * intra_p2p_[r] > n * std::min<std::size_t>(b.p2p_max, n ? n - 1 : 0)) {
      fail("ring " + std::to_string(r) + " P2P quota " + std::to_string(intra_p2p_[r]) +
           " exceeds what " + std::to_string(n) + " nodes can carry");
    }
    if (intra_cp_[r] > pair_cap || 2 * intra_cp_[r] > n * static_cast<std::size_t>(b.cp_max)) {
      fail("ring " + std::to_string(r) + " CP quota " + std::to_string(intra_cp_[r]) +
           " exceeds what " + std::to_string(n) + " nodes can carry");
    }
  }
  for (std::size_t i = 0; i < profile_.bridges.size(); ++i) {
    const auto& br = profile_.bridges[i];
    const std::size_t nr = ring_nodes_[br.r];
    const std::size_t ns = ring_nodes_[br.s];
    const auto& a = stats(br.r).bounds;
    const auto& c = stats(br.s).bounds;
    const std::size_t total = bridge_p2p_[i] + bridge_cp_[i];
    if (total > nr * ns || bridge_p2p_[i] > nr * a.p2p_max || bridge_p2p_[i] > ns * c.p2p_max ||
        bridge_cp_[i] > nr * a.cp_max || bridge_cp_[i] > ns * c.cp_max) {
      fail("bridge " + bridge_name(br) + " quota exceeds what its rings can carry");
    }
  }
}

std::size_t Generator::bridge_p2p_quota(const BridgeStats& b) const {
  for (std::size_t i = 0; i < profile_.bridges.size(); ++i) {
    if (profile_.bridges[i].r == b.r && profile_.bridges[i].s == b.s) return bridge_p2p_[i];
  }
  return 0;
}

std::size_t Generator::bridge_cp_quota(const BridgeStats& b) const {
  for (std::size_t i = 0; i < profile_.bridges.size(); ++i) {
    if (profile_.bridges[i].r == b.r && profile_.bridges[i].s == b.s) return bridge_cp_[i];
  }
  return 0;
}

bool Generator::p2p_room(NodeId v) const {
  return ring_of_[v] >= 0 && graph_.p2p_degree(v) < stats(ring_of_[v]).bounds.p2p_max;
}

bool Generator::cp_room(NodeId v) const {
  return ring_of_[v] >= 0 && graph_.cp_degree(v) < stats(ring_of_[v]).bounds.cp_max;
}

double Generator::kernel(NodeId v, std::size_t degree) const {
  return std::pow(1.0 + static_cast<double>(degree), stats(ring_of_[v]).rgr_coefficient);
}

bool Generator::below_min_p2p(NodeId v) const {
  return graph_.p2p_degree(v) < stats(ring_of_[v]).bounds.p2p_min;
}

bool Generator::below_min_cp(NodeId v) const {
  return graph_.cp_degree(v) < stats(ring_of_[v]).bounds.cp_min;
}

// A ring node left at degree 1 would read back as a hanger.
bool Generator::needs_degree(NodeId v) const { return graph_.degree(v) < 2; }

bool Generator::bias_active() {
  if (cfg_.bias_strength <= 0.0) return false;
  if (static_cast<double>(two_provider_nodes_) >=
      two_provider_target_ * static_cast<double>(ring_node_total_)) {
    return false;
  }
  return uniform01(rng_) < cfg_.bias_strength;
}

NodeId Generator::new_node(int ring) {
  const NodeId v = graph_.add_node();
  ring_of_.push_back(ring);
  hanger_origin_.push_back(kNoRing);
  uplink_.push_back(0);
  gateway_.push_back(0);
  core_peers_.push_back(0);
  visit_stamp_.push_back(0);
  if (ring >= 0) members_[ring].push_back(v);
  return v;
}

void Generator::note_edge(NodeId u, NodeId v) {
  const int ru = ring_of_[u];
  const int rv = ring_of_[v];
  if (ru < 0 || rv < 0) return;
  if (ru == rv - 1) uplink_[v] = 1;
  if (rv == ru - 1) uplink_[u] = 1;
  if (ru <= rv - 2) gateway_[v] = 1;
  if (rv <= ru - 2) gateway_[u] = 1;
}

bool Generator::valid_p2p(NodeId u, NodeId v) const {
  if (u == v || graph_.adjacent(u, v)) return false;
  // A non-core node peering with the whole core would blur the clique.
  const std::size_t c = profile_.core_size;
  if (c >= 2) {
    if (ring_of_[u] == 0 && ring_of_[v] != 0 && core_peers_[v] + 1 >= c) return false;
    if (ring_of_[v] == 0 && ring_of_[u] != 0 && core_peers_[u] + 1 >= c) return false;
  }
  return true;
}

bool Generator::would_cycle(NodeId customer, NodeId provider) {
  if (customer == provider) return true;
  if (++visit_epoch_ == 0) {
    std::fill(visit_stamp_.begin(), visit_stamp_.end(), 0);
    visit_epoch_ = 1;
  }
  dfs_stack_.assign(1, provider);
  visit_stamp_[provider] = visit_epoch_;
  while (!dfs_stack_.empty()) {
    const NodeId v = dfs_stack_.back();
    dfs_stack_.pop_back();
    for (NodeId p : graph_.providers(v)) {
      if (p == customer) return true;
      if (visit_stamp_[p] != visit_epoch_) {
        visit_stamp_[p] = visit_epoch_;
        dfs_stack_.push_back(p);
      }
    }
  }
  return false;
}

void Generator::add_p2p(NodeId u, NodeId v) {
  graph_.add_edge({u, v, RelType::kP2P});
  if (ring_of_[u] == 0 && ring_of_[v] != 0) ++core_peers_[v];
  if (ring_of_[v] == 0 && ring_of_[u] != 0) ++core_peers_[u];
  note_edge(u, v);
}

void Generator::promote(NodeId v, int ring) {
  const int old = ring_of_[v];
  std::erase(members_[old], v);
  members_[ring].push_back(v);
  ring_of_[v] = ring;
  ++report_.promotions;
  report_.log.push_back("promoted node " + std::to_string(v) + " from ring " +
                        std::to_string(old) + " to ring " + std::to_string(ring));
}

void Generator::add_cp(NodeId customer, NodeId provider) {
  const std::size_t before = graph_.provider_count(customer);
  graph_.add_edge({customer, provider, RelType::kCP});
  if (ring_of_[customer] >= 0) {
    if (before == 1) ++two_provider_nodes_;
    if (before == 2) --two_provider_nodes_;
  }
  if (ring_of_[customer] >= 0 && ring_of_[provider] > ring_of_[customer]) {
    promote(customer, ring_of_[provider]);
  }
  note_edge(customer, provider);
}

void Generator::build_core() {
  graph_ = jellyfish::build_core(profile_.core_size);
  const std::size_t c = profile_.core_size;
  ring_of_.assign(c, 0);
  hanger_origin_.assign(c, kNoRing);
  uplink_.assign(c, 0);
  gateway_.assign(c, 0);
  core_peers_.assign(c, 0);
  visit_stamp_.assign(c, 0);
  members_[0].resize(c);
  std::iota(members_[0].begin(), members_[0].end(), NodeId{0});
  report_.phases.push_back({"core", intra_p2p_[0], graph_.edge_count(), 0, 0});
}

void Generator::populate_rings() {
  for (int r = 1; r <= profile_.ring_count(); ++r) {
    for (std::size_t i = 0; i < ring_nodes_[r]; ++i) new_node(r);
  }
}

std::size_t Generator::place_p2p_quota(PhaseReport& phase, int ring_a, int ring_b,
                                       std::size_t quota) {
  const std::size_t n = graph_.node_count();
  const bool same = ring_a == ring_b;
  const bool skip = ring_b >= ring_a + 2;
  auto weight = [this](NodeId v) { return p2p_room(v) ? kernel(v, graph_.p2p_degree(v)) : 0.0; };
  auto below = [this](NodeId v) { return below_min_p2p(v); };
  Picker a(members_[ring_a], weight, {below}, n);
  std::optional<Picker> b_own;
  if (!same) {
    std::vector<Picker::Tier> tiers;
    if (skip) tiers.emplace_back([this](NodeId v) { return gateway_[v] != 0; });
    tiers.emplace_back(below);
    b_own.emplace(members_[ring_b], weight, std::move(tiers), n);
  }
  Picker& b = same ? a : *b_own;

  std::size_t placed = 0;
  for (std::size_t e = 0; e < quota; ++e) {
    std::optional<NodeId> u = a.pick(rng_);
    std::optional<NodeId> v;
    bool ok = false;
    for (std::uint32_t t = 0; u && t < cfg_.max_retries_per_edge; ++t) {
      v = b.pick(rng_);
      if (!v) break;
      if (valid_p2p(*u, *v)) {
        ok = true;
        break;
      }
      ++phase.retries;
      if (t % 2 == 1) u = a.pick(rng_);
    }
    if (!ok && u) {
      v = b.find([&](NodeId x) { return valid_p2p(*u, x); });
      ok = v.has_value();
    }
    if (!ok) {
      ++phase.quota_reductions;
      report_.log.push_back(phase.phase + ": no valid pair, quota reduced by one");
      continue;
    }
    add_p2p(*u, *v);
    ++placed;
    a.refresh(*u);
    a.refresh(*v);
    if (!same) {
      b.refresh(*u);
      b.refresh(*v);
    }
  }
  phase.placed += placed;
  return placed;
}

std::size_t Generator::top_up_intra_p2p(int ring, std::size_t missing, PhaseReport& phase) {
  if (missing == 0) return 0;
  report_.log.push_back(phase.phase + ": topping up " + std::to_string(missing) +
                        " edges lost to stub collisions");
  return place_p2p_quota(phase, ring, ring, missing);
}

std::size_t Generator::place_intra_ring_p2p(int ring) {
  PhaseReport phase{"intra-p2p ring " + std::to_string(ring), intra_p2p_[ring], 0, 0, 0};
  const std::size_t quota = intra_p2p_[ring];
  const auto& nodes = members_[ring];
  if (quota > 0) {
    const auto& st = stats(ring);
    const auto kmax = std::min<std::uint32_t>(
        st.bounds.p2p_max, static_cast<std::uint32_t>(nodes.size() > 0 ? nodes.size() - 1 : 0));
    double gamma = st.p2p_powerlaw_exponent.value_or(0.0);
    const bool shaped = st.p2p_powerlaw_exponent.has_value();
    if (shaped) gamma = calibrate_sampling_exponent(nodes.size(), quota, gamma, kmax);
    // Without a fitted exponent the stubs are spread near-uniformly.
    const auto seq = powerlaw_degree_sequence(nodes.size(), quota, shaped ? gamma : 8.0,
                                              kmax, rng_);

    // Pair stubs with weight-proportional draws; a draw that repeats an edge
    // is retried, and a stub that cannot be placed is dropped.
    WeightedSampler stubs(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) stubs.set(i, seq[i]);
    while (stubs.any()) {
      const std::size_t i = stubs.sample(rng_);
      const double wi = stubs.weight(i);
      stubs.set(i, 0.0);
      bool ok = false;
      for (std::uint32_t t = 0; t < cfg_.max_retries_per_edge; ++t) {
        const std::size_t j = stubs.sample(rng_);
        if (j == stubs.size()) break;
        if (!graph_.adjacent(nodes[i], nodes[j])) {
          add_p2p(nodes[i], nodes[j]);
          ++phase.placed;
          stubs.set(j, stubs.weight(j) - 1.0);
          ok = true;
          break;
        }
        ++phase.retries;
      }
      if (!ok) ++report_.dropped_stubs;
      stubs.set(i, wi - 1.0);
    }
    top_up_intra_p2p(ring, quota - std::min(quota, phase.placed), phase);
  }
  report_.phases.push_back(phase);
  return phase.placed;
}

std::size_t Generator::place_bridge_p2p(const BridgeStats& bridge) {
  PhaseReport phase{"bridge-p2p " + bridge_name(bridge), bridge_p2p_quota(bridge), 0, 0, 0};
  place_p2p_quota(phase, bridge.r, bridge.s, phase.target);
  report_.phases.push_back(phase);
  return phase.placed;
}

std::size_t Generator::place_cp_quota(PhaseReport& phase, int provider_ring,
                                      int customer_ring, std::size_t quota) {
  const std::size_t n = graph_.node_count();
  const bool adjacent_bridge = customer_ring == provider_ring + 1;
  const bool skip = customer_ring >= provider_ring + 2;

  Picker providers(
      members_[provider_ring],
      [this](NodeId v) { return cp_room(v) ? kernel(v, graph_.cp_degree(v)) : 0.0; },
      {[this](NodeId v) { return below_min_cp(v); }}, n);

  std::vector<Picker::Tier> tiers;
  if (adjacent_bridge) tiers.emplace_back([this](NodeId v) { return uplink_[v] == 0; });
  if (skip) tiers.emplace_back([this](NodeId v) { return gateway_[v] != 0; });
  tiers.emplace_back([this](NodeId v) { return needs_degree(v) || below_min_cp(v); });
  const auto bias_tier = static_cast<unsigned>(tiers.size());
  tiers.emplace_back([this](NodeId v) {
    return graph_.provider_count(v) == 1 && graph_.customer_count(v) != 2;
  });
  Picker customers(members_[customer_ring],
                   [this](NodeId v) { return cp_room(v) ? 1.0 : 0.0; }, std::move(tiers), n);

  auto valid = [this](NodeId c, NodeId p) {
    return c != p && !graph_.adjacent(c, p) && !would_cycle(c, p);
  };

  std::size_t placed = 0;
  for (std::size_t e = 0; e < quota; ++e) {
    unsigned mask = Picker::kAllTiers;
    if (!bias_active()) mask &= ~(1u << bias_tier);
    std::optional<NodeId> p = providers.pick(rng_);
    std::optional<NodeId> c;
    bool ok = false;
    for (std::uint32_t t = 0; p && t < cfg_.max_retries_per_edge; ++t) {
      c = customers.pick(rng_, mask);
      if (!c) break;
      if (valid(*c, *p)) {
        ok = true;
        break;
      }
      ++phase.retries;
      if ((t + 1) % kProviderRedrawEvery == 0) p = providers.pick(rng_);
    }
    if (!ok && p) {
      c = customers.find([&](NodeId x) { return valid(x, *p); }, mask);
      ok = c.has_value();
    }
    if (!ok) {
      ++phase.quota_reductions;
      report_.log.push_back(phase.phase + ": retries exhausted, quota reduced by one");
      continue;
    }
    add_cp(*c, *p);
    ++placed;
    for (NodeId x : {*c, *p}) {
      providers.refresh(x);
      customers.refresh(x);
    }
  }
  phase.placed += placed;
  return placed;
}

std::size_t Generator::place_intra_ring_cp(int ring) {
  PhaseReport phase{"intra-cp ring " + std::to_string(ring), intra_cp_[ring], 0, 0, 0};
  place_cp_quota(phase, ring, ring, phase.target);
  report_.phases.push_back(phase);
  return phase.placed;
}

std::size_t Generator::place_bridge_cp(const BridgeStats& bridge) {
  PhaseReport phase{"bridge-cp " + bridge_name(bridge), bridge_cp_quota(bridge), 0, 0, 0};
  place_cp_quota(phase, bridge.r, bridge.s, phase.target);
  report_.phases.push_back(phase);
  return phase.placed;
}

std::size_t Generator::place_cp_edges() {
  std::size_t placed = 0;
  for (int r = 1; r <= profile_.ring_count(); ++r) placed += place_intra_ring_cp(r);
  for (const auto& b : profile_.bridges) placed += place_bridge_cp(b);
  return placed;
}

std::size_t Generator::fill_cp_minimums() {
  PhaseReport phase{"cp minimum fill", 0, 0, 0, 0};
  for (int r = 1; r <= profile_.ring_count(); ++r) {
    Picker providers(
        members_[r - 1],
        [this](NodeId v) { return cp_room(v) ? kernel(v, graph_.cp_degree(v)) : 0.0; }, {},
        graph_.node_count());
    const std::vector<NodeId> short_nodes = [&] {
      std::vector<NodeId> out;
      for (NodeId v : members_[r]) {
        if (below_min_cp(v) && cp_room(v)) out.push_back(v);
      }
      return out;
    }();
    for (NodeId c : short_nodes) {
      ++phase.target;
      auto valid = [&](NodeId p) { return !graph_.adjacent(c, p) && !would_cycle(c, p); };
      std::optional<NodeId> p;
      for (std::uint32_t t = 0; t < cfg_.max_retries_per_edge; ++t) {
        p = providers.pick(rng_);
        if (!p || valid(*p)) break;
        ++phase.retries;
        p.reset();
      }
      if (!p) p = providers.find(valid);
      if (!p) {
        ++phase.quota_reductions;
        report_.log.push_back(phase.phase + ": no provider for node " + std::to_string(c));
        continue;
      }
      add_cp(c, *p);
      providers.refresh(*p);
      ++phase.placed;
      report_.log.push_back(phase.phase + ": node " + std::to_string(c) + " in ring " +
                            std::to_string(r) + " given a provider");
    }
  }
  report_.phases.push_back(phase);
  return phase.placed;
}

std::size_t Generator::repair_connectivity() {
  auto out = jellyfish::repair_connectivity(graph_, ring_of_, profile_, rng_);
  for (const Edge& e : out.added) {
    const std::size_t after = graph_.provider_count(e.a);
    if (ring_of_[e.a] >= 0) {
      if (after == 2) ++two_provider_nodes_;
      if (after == 3) --two_provider_nodes_;
    }
    note_edge(e.a, e.b);
  }
  report_.repair_edges += out.added.size();
  report_.bound_exemptions += out.exemptions;
  if (!out.added.empty()) {
    report_.log.push_back("repair: " + std::to_string(out.added.size()) + " edges, " +
                          std::to_string(out.exemptions) + " bound exemptions");
  }
  return out.added.size();
}

std::size_t Generator::place_hangers() {
  const bool cp = cfg_.hanger_relation == RelType::kCP;
  std::size_t added = 0;
  PhaseReport phase{"hangers", 0, 0, 0, 0};
  for (int r = 0; r <= profile_.ring_count(); ++r) {
    phase.target += hanger_nodes_[r];
    if (hanger_nodes_[r] == 0) continue;
    Picker anchors(
        members_[r],
        [this, cp](NodeId v) {
          return (cp ? cp_room(v) : p2p_room(v)) ? kernel(v, graph_.degree(v)) : 0.0;
        },
        {[this, cp](NodeId v) {
          return needs_degree(v) || (cp ? below_min_cp(v) : below_min_p2p(v));
        }},
        graph_.node_count());
    for (std::size_t i = 0; i < hanger_nodes_[r]; ++i) {
      const auto u = anchors.pick(rng_);
      if (!u) {
        throw Error(ErrorCode::kInfeasibleQuota,
                    "no ring " + std::to_string(r) + " node has room for another hanger");
      }
      const NodeId h = new_node(kNoRing);
      hanger_origin_[h] = r;
      if (cp) {
        graph_.add_edge({h, *u, RelType::kCP});
      } else {
        graph_.add_edge({h, *u, RelType::kP2P});
      }
      anchors.refresh(*u);
      ++added;
    }
  }
  phase.placed = added;
  report_.phases.push_back(phase);
  return added;
}

GenerationResult Generator::finish() && {
  Decomposition d;
  d.core.resize(profile_.core_size);
  std::iota(d.core.begin(), d.core.end(), NodeId{0});
  d.ring_of = std::move(ring_of_);
  d.hanger_origin = std::move(hanger_origin_);
  classify_edges(graph_, d);
  return {std::move(graph_), std::move(d), std::move(report_)};
}

}  // namespace jellyfish

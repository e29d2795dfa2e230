#include "jellyfish/profile.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "jellyfish/error.h"

namespace jellyfish {

const BridgeStats* JellyfishProfile::bridge(int r, int s) const {
  for (const BridgeStats& b : bridges) {
    if (b.r == r && b.s == s) return &b;
  }
  return nullptr;
}

const HangerStats* JellyfishProfile::hanger(int origin_ring) const {
  for (const HangerStats& h : hangers) {
    if (h.origin_ring == origin_ring) return &h;
  }
  return nullptr;
}

void check_profile(const JellyfishProfile& p) {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInfeasibleProfile, why);
  };
  if (p.rings.empty()) fail("no rings");
  if (p.core_size < 1) fail("core_size must be at least 1");
  if (p.rings[0].node_count != p.core_size) fail("ring 0 size differs from core_size");
  if (p.rings[0].p2p_intra != p.core_size * (p.core_size - 1) / 2) {
    fail("ring 0 P2P count is not a clique on core_size nodes");
  }
  if (p.rings[0].cp_intra != 0) fail("ring 0 holds CP edges");

  double fraction_sum = 0.0;
  std::size_t edge_sum = 0;
  for (std::size_t r = 0; r < p.rings.size(); ++r) {
    const RingStats& rs = p.rings[r];
    if (rs.node_fraction < 0.0 || rs.node_fraction > 1.0) {
      fail("ring " + std::to_string(r) + " fraction outside [0,1]");
    }
    if (rs.bounds.p2p_min > rs.bounds.p2p_max || rs.bounds.cp_min > rs.bounds.cp_max) {
      fail("ring " + std::to_string(r) + " has min bound above max bound");
    }
    fraction_sum += rs.node_fraction;
    edge_sum += rs.p2p_intra + rs.cp_intra;
  }
  std::set<std::pair<int, int>> seen;
  for (const BridgeStats& b : p.bridges) {
    if (!(b.r >= 0 && b.r < b.s && b.s <= p.ring_count())) {
      fail("bridge (" + std::to_string(b.r) + "," + std::to_string(b.s) +
           ") out of range");
    }
    if (!seen.emplace(b.r, b.s).second) fail("duplicate bridge");
    edge_sum += b.p2p_count + b.cp_count;
  }
  std::set<int> origins;
  for (const HangerStats& h : p.hangers) {
    if (h.origin_ring < 0 || h.origin_ring > p.ring_count()) {
      fail("hanger origin ring out of range");
    }
    if (!origins.insert(h.origin_ring).second) fail("duplicate hanger origin");
    if (h.node_fraction < 0.0 || h.node_fraction > 1.0) {
      fail("hanger fraction outside [0,1]");
    }
    fraction_sum += h.node_fraction;
    edge_sum += h.node_count;
  }
  if (std::abs(fraction_sum - 1.0) > kFractionSumTolerance) {
    fail("node fractions sum to " + std::to_string(fraction_sum));
  }
  if (edge_sum != p.total_edges) {
    fail("edge tallies sum to " + std::to_string(edge_sum) + ", total_edges is " +
         std::to_string(p.total_edges));
  }
}

double fit_rgr_coefficient(const AsGraph& g, const Decomposition& d, int ring) {
  std::vector<std::uint32_t> cp;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (d.ring_of[v] == ring) cp.push_back(static_cast<std::uint32_t>(g.cp_degree(v)));
  }
  if (cp.empty()) {
    throw Error(ErrorCode::kDegenerateInput,
                "ring " + std::to_string(ring) + " is empty");
  }
  return fit_rgr_coefficient(cp);
}

JellyfishProfile extract_profile(const AsGraph& g, const Decomposition& d) {
  validate(g, d);
  JellyfishProfile p;
  p.total_nodes = g.node_count();
  p.core_size = d.core.size();
  const int top = d.ring_count;
  p.rings.resize(static_cast<std::size_t>(top) + 1);

  // Per-node intra-ring P2P degree, for the exponent fit.
  std::vector<std::uint32_t> intra_p2p(g.node_count(), 0);
  std::vector<std::vector<std::size_t>> bridge_p2p(top + 1, std::vector<std::size_t>(top + 1, 0));
  std::vector<std::vector<std::size_t>> bridge_cp = bridge_p2p;
  std::size_t classified = 0;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    const Edge& e = g.edges()[i];
    const EdgeClass& c = d.edge_class[i];
    const bool p2p = e.rel == RelType::kP2P;
    switch (c.kind) {
      case EdgeKind::kRing:
        ++classified;
        if (p2p) {
          ++p.rings[c.r].p2p_intra;
          ++intra_p2p[e.a];
          ++intra_p2p[e.b];
        } else {
          ++p.rings[c.r].cp_intra;
        }
        break;
      case EdgeKind::kBridge:
        ++classified;
        ++(p2p ? bridge_p2p : bridge_cp)[c.r][c.s];
        break;
      case EdgeKind::kHanger:
        ++classified;
        break;
      case EdgeKind::kExcluded:
        break;
    }
  }
  p.total_edges = classified;

  const double total = static_cast<double>(p.total_nodes);
  for (int r = 0; r <= top; ++r) {
    RingStats& rs = p.rings[r];
    std::vector<std::uint32_t> intra, cp;
    bool first = true;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (d.ring_of[v] != r) continue;
      ++rs.node_count;
      if (intra_p2p[v] > 0) intra.push_back(intra_p2p[v]);
      const auto pk = static_cast<std::uint32_t>(g.p2p_degree(v));
      const auto ck = static_cast<std::uint32_t>(g.cp_degree(v));
      cp.push_back(ck);
      if (first) {
        rs.bounds = {pk, pk, ck, ck};
        first = false;
      } else {
        rs.bounds.p2p_min = std::min(rs.bounds.p2p_min, pk);
        rs.bounds.p2p_max = std::max(rs.bounds.p2p_max, pk);
        rs.bounds.cp_min = std::min(rs.bounds.cp_min, ck);
        rs.bounds.cp_max = std::max(rs.bounds.cp_max, ck);
      }
    }
    rs.node_fraction = rs.node_count / total;
    try {
      rs.p2p_powerlaw_exponent = fit_powerlaw_exponent(intra);
    } catch (const Error&) {
      rs.p2p_powerlaw_exponent.reset();
    }
    try {
      rs.rgr_coefficient = fit_rgr_coefficient(cp);
    } catch (const Error&) {
      rs.rgr_coefficient = 1.0;
    }
  }

  for (int r = 0; r <= top; ++r) {
    for (int s = r + 1; s <= top; ++s) {
      if (bridge_p2p[r][s] + bridge_cp[r][s] == 0) continue;
      p.bridges.push_back({r, s, bridge_p2p[r][s], bridge_cp[r][s]});
    }
    const std::size_t h = d.hanger_count(r);
    p.hangers.push_back({r, h, h / total});
  }

  std::size_t ring_nodes = 0;
  std::map<std::uint32_t, std::size_t> providers;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (d.ring_of[v] == kNoRing) continue;
    ++ring_nodes;
    ++providers[static_cast<std::uint32_t>(g.provider_count(v))];
  }
  for (const auto& [k, n] : providers) {
    p.provider_count_histogram[k] = static_cast<double>(n) / ring_nodes;
  }
  return p;
}

}  // namespace jellyfish

#include "jellyfish/io.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

#include "json.hpp"
#include "jellyfish/error.h"

namespace jellyfish {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + what);
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

void check_schema(const json& j) {
  if (!j.is_object() || !j.contains("schema_version")) {
    throw Error(ErrorCode::kParseError, "missing schema_version");
  }
  const int v = j.at("schema_version").get<int>();
  if (v != kSchemaVersion) {
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "schema_version " + std::to_string(v) + ", expected " +
                    std::to_string(kSchemaVersion));
  }
}

// Wraps nlohmann's type and key errors as parse errors.
template <typename Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

json series_to_json(const Series& s) {
  json a = json::array();
  for (auto [k, v] : s) a.push_back({k, v});
  return a;
}

Series series_from_json(const json& a) {
  Series s;
  for (const auto& p : a) s.emplace_back(p.at(0).get<std::uint32_t>(), p.at(1).get<double>());
  return s;
}

std::string tolerance_text(const Tolerance& t) {
  std::ostringstream os;
  switch (t.kind) {
    case ToleranceKind::kRelative: os << "rel " << t.value; break;
    case ToleranceKind::kFactor: os << "factor " << t.value; break;
    case ToleranceKind::kAbsolute: os << "abs " << t.value; break;
    case ToleranceKind::kRange: os << "range [" << t.lo << ", " << t.hi << "]"; break;
    case ToleranceKind::kExact: os << "exact"; break;
  }
  return os.str();
}

}  // namespace

LoadedGraph read_graph(std::istream& in) {
  struct Record {
    std::uint64_t a, b;
    int code;
    std::size_t line;
  };
  std::vector<Record> records;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = raw;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    std::string_view fields[3];
    std::size_t count = 0;
    while (count < 3) {
      const auto bar = s.find('|');
      fields[count++] = s.substr(0, bar);
      if (bar == std::string_view::npos) break;
      s.remove_prefix(bar + 1);
    }
    if (count < 3) parse_error(line, "expected a|b|code");
    Record r{0, 0, 0, line};
    if (!parse_number(fields[0], r.a) || !parse_number(fields[1], r.b)) {
      parse_error(line, "bad AS number");
    }
    if (!parse_number(fields[2], r.code) || (r.code != kCodePeer && r.code != kCodeProvider)) {
      parse_error(line, "relationship code must be 0 or -1");
    }
    if (r.a == r.b) parse_error(line, "self relationship for AS " + std::to_string(r.a));
    records.push_back(r);
  }
  if (in.bad()) throw Error(ErrorCode::kIoError, "read failed");

  LoadedGraph out;
  for (const auto& r : records) {
    out.as_numbers.push_back(r.a);
    out.as_numbers.push_back(r.b);
  }
  std::sort(out.as_numbers.begin(), out.as_numbers.end());
  out.as_numbers.erase(std::unique(out.as_numbers.begin(), out.as_numbers.end()),
                       out.as_numbers.end());
  auto id = [&](std::uint64_t as) {
    return static_cast<NodeId>(
        std::lower_bound(out.as_numbers.begin(), out.as_numbers.end(), as) -
        out.as_numbers.begin());
  };
  out.graph = AsGraph(out.as_numbers.size());
  for (const auto& r : records) {
    const NodeId a = id(r.a);
    const NodeId b = id(r.b);
    const Edge e = r.code == kCodePeer ? Edge{a, b, RelType::kP2P} : Edge{b, a, RelType::kCP};
    try {
      out.graph.add_edge(e);
    } catch (const Error& err) {
      if (err.code() == ErrorCode::kDuplicateEdge) {
        ++out.duplicates;
        out.warnings.push_back("line " + std::to_string(r.line) + ": duplicate record " +
                               std::to_string(r.a) + "|" + std::to_string(r.b) +
                               " ignored");
        continue;
      }
      if (err.code() == ErrorCode::kConflictingRelationship) {
        throw Error(ErrorCode::kConflictingRelationship,
                    "line " + std::to_string(r.line) + ": conflicting relationship for " +
                        std::to_string(r.a) + "|" + std::to_string(r.b));
      }
      throw;
    }
  }
  return out;
}

LoadedGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return read_graph(in);
}

void write_graph(std::ostream& out, const AsGraph& g,
                 std::span<const std::uint64_t> as_numbers, const std::string& comment) {
  auto as = [&](NodeId v) -> std::uint64_t {
    return as_numbers.empty() ? std::uint64_t{v} + 1 : as_numbers[v];
  };
  if (!comment.empty()) out << "# " << comment << '\n';
  out << "# " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
  out << "# a|b|0 peers, a|b|-1 a provides transit to b\n";
  for (const Edge& e : g.canonical_edges()) {
    if (e.rel == RelType::kP2P) {
      out << as(e.a) << '|' << as(e.b) << "|0\n";
    } else {
      out << as(e.b) << '|' << as(e.a) << "|-1\n";
    }
  }
}

void save_graph(const std::filesystem::path& path, const AsGraph& g,
                std::span<const std::uint64_t> as_numbers, const std::string& comment) {
  std::ostringstream os;
  write_graph(os, g, as_numbers, comment);
  write_file(path, os.str());
}

std::string profile_to_json(const JellyfishProfile& p) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["total_nodes"] = p.total_nodes;
  j["total_edges"] = p.total_edges;
  j["core_size"] = p.core_size;
  j["rings"] = json::array();
  for (std::size_t r = 0; r < p.rings.size(); ++r) {
    const auto& s = p.rings[r];
    json x;
    x["ring"] = r;
    x["node_count"] = s.node_count;
    x["node_fraction"] = s.node_fraction;
    x["p2p_intra"] = s.p2p_intra;
    x["cp_intra"] = s.cp_intra;
    x["p2p_powerlaw_exponent"] =
        s.p2p_powerlaw_exponent ? json(*s.p2p_powerlaw_exponent) : json(nullptr);
    x["rgr_coefficient"] = s.rgr_coefficient;
    x["bounds"] = {{"p2p_min", s.bounds.p2p_min},
                   {"p2p_max", s.bounds.p2p_max},
                   {"cp_min", s.bounds.cp_min},
                   {"cp_max", s.bounds.cp_max}};
    j["rings"].push_back(x);
  }
  j["bridges"] = json::array();
  for (const auto& b : p.bridges) {
    j["bridges"].push_back(
        {{"r", b.r}, {"s", b.s}, {"p2p_count", b.p2p_count}, {"cp_count", b.cp_count}});
  }
  j["hangers"] = json::array();
  for (const auto& h : p.hangers) {
    j["hangers"].push_back({{"origin_ring", h.origin_ring},
                            {"node_count", h.node_count},
                            {"node_fraction", h.node_fraction}});
  }
  json hist = json::object();
  for (auto [k, f] : p.provider_count_histogram) hist[std::to_string(k)] = f;
  j["provider_count_histogram"] = hist;
  return j.dump(2) + "\n";
}

JellyfishProfile profile_from_json(const std::string& text) {
  const json j = parse_json(text);
  check_schema(j);
  return guarded([&] {
    JellyfishProfile p;
    p.total_nodes = j.at("total_nodes").get<std::size_t>();
    p.total_edges = j.at("total_edges").get<std::size_t>();
    p.core_size = j.at("core_size").get<std::size_t>();
    for (const auto& x : j.at("rings")) {
      RingStats s;
      s.node_count = x.at("node_count").get<std::size_t>();
      s.node_fraction = x.at("node_fraction").get<double>();
      s.p2p_intra = x.at("p2p_intra").get<std::size_t>();
      s.cp_intra = x.at("cp_intra").get<std::size_t>();
      if (x.contains("p2p_powerlaw_exponent") && !x["p2p_powerlaw_exponent"].is_null()) {
        s.p2p_powerlaw_exponent = x["p2p_powerlaw_exponent"].get<double>();
      }
      s.rgr_coefficient = x.value("rgr_coefficient", 1.0);
      const auto& b = x.at("bounds");
      s.bounds = {b.at("p2p_min").get<std::uint32_t>(), b.at("p2p_max").get<std::uint32_t>(),
                  b.at("cp_min").get<std::uint32_t>(), b.at("cp_max").get<std::uint32_t>()};
      p.rings.push_back(s);
    }
    for (const auto& x : j.at("bridges")) {
      p.bridges.push_back({x.at("r").get<int>(), x.at("s").get<int>(),
                           x.at("p2p_count").get<std::size_t>(),
                           x.at("cp_count").get<std::size_t>()});
    }
    for (const auto& x : j.at("hangers")) {
      p.hangers.push_back({x.at("origin_ring").get<int>(), x.at("node_count").get<std::size_t>(),
                           x.at("node_fraction").get<double>()});
    }
    if (j.contains("provider_count_histogram")) {
      for (const auto& [k, f] : j["provider_count_histogram"].items()) {
        std::uint32_t key = 0;
        if (!parse_number(k, key)) {
          throw Error(ErrorCode::kParseError, "bad provider count key '" + k + "'");
        }
        p.provider_count_histogram[key] = f.get<double>();
      }
    }
    return p;
  });
}

void save_profile(const std::filesystem::path& path, const JellyfishProfile& p) {
  write_file(path, profile_to_json(p));
}

JellyfishProfile load_profile(const std::filesystem::path& path) {
  return profile_from_json(read_file(path));
}

std::string report_to_json(const MetricsReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["node_count"] = r.node_count;
  j["edge_count"] = r.edge_count;
  j["avg_degree"] = r.avg_degree;
  j["max_degree"] = r.max_degree;
  j["min_degree"] = r.min_degree;
  j["diameter"] = r.diameter;
  j["diameter_sampled"] = r.diameter_sampled;
  j["effective_diameter"] = r.effective_diameter;
  j["effective_diameter_sampled"] = r.effective_diameter_sampled;
  j["clustering_coefficient"] = r.clustering_coefficient;
  j["max_local_clustering"] = r.max_local_clustering;
  j["mutual_information_ratio"] = r.mutual_information_ratio;
  j["degree_distribution"] = series_to_json(r.degree_distribution);
  j["degree_ccdf"] = series_to_json(r.degree_ccdf);
  return j.dump(2) + "\n";
}

MetricsReport report_from_json(const std::string& text) {
  const json j = parse_json(text);
  check_schema(j);
  return guarded([&] {
    MetricsReport r;
    r.node_count = j.at("node_count").get<std::size_t>();
    r.edge_count = j.at("edge_count").get<std::size_t>();
    r.avg_degree = j.at("avg_degree").get<double>();
    r.max_degree = j.at("max_degree").get<std::size_t>();
    r.min_degree = j.at("min_degree").get<std::size_t>();
    r.diameter = j.at("diameter").get<std::size_t>();
    r.diameter_sampled = j.at("diameter_sampled").get<bool>();
    r.effective_diameter = j.at("effective_diameter").get<double>();
    r.effective_diameter_sampled = j.at("effective_diameter_sampled").get<bool>();
    r.clustering_coefficient = j.at("clustering_coefficient").get<double>();
    r.max_local_clustering = j.at("max_local_clustering").get<double>();
    r.mutual_information_ratio = j.at("mutual_information_ratio").get<double>();
    r.degree_distribution = series_from_json(j.at("degree_distribution"));
    r.degree_ccdf = series_from_json(j.at("degree_ccdf"));
    return r;
  });
}

void save_report(const std::filesystem::path& path, const MetricsReport& r) {
  write_file(path, report_to_json(r));
}

MetricsReport load_report(const std::filesystem::path& path) {
  return report_from_json(read_file(path));
}

Tolerances tolerances_from_json(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "tolerances must be an object");
  const auto& names = metric_names();
  return guarded([&] {
    Tolerances out;
    for (const auto& [name, entry] : j.items()) {
      if (name == "schema_version") continue;
      if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw Error(ErrorCode::kParseError, "unknown metric '" + name + "'");
      }
      Tolerance t;
      if (entry.contains("relative")) {
        t = {ToleranceKind::kRelative, entry["relative"].get<double>()};
      } else if (entry.contains("factor")) {
        t = {ToleranceKind::kFactor, entry["factor"].get<double>()};
      } else if (entry.contains("absolute")) {
        t = {ToleranceKind::kAbsolute, entry["absolute"].get<double>()};
      } else if (entry.contains("range")) {
        t = {ToleranceKind::kRange, 0.0, entry["range"].at(0).get<double>(),
             entry["range"].at(1).get<double>()};
        if (t.lo > t.hi) throw Error(ErrorCode::kParseError, "empty range for '" + name + "'");
      } else if (entry.contains("exact")) {
        t = {ToleranceKind::kExact};
      } else {
        throw Error(ErrorCode::kParseError, "no tolerance kind for '" + name + "'");
      }
      out[name] = t;
    }
    return out;
  });
}

Tolerances load_tolerances(const std::filesystem::path& path) {
  return tolerances_from_json(read_file(path));
}

void write_decomposition_summary(std::ostream& out, const AsGraph& g,
                                 const Decomposition& d) {
  const int top = d.ring_count;
  std::vector<std::size_t> nodes(top + 1, 0), hangers(top + 1, 0), p2p(top + 1, 0),
      cp(top + 1, 0);
  std::map<std::pair<int, int>, std::pair<std::size_t, std::size_t>> bridges;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (d.in_ring(v)) ++nodes[d.ring_of[v]];
    if (d.is_hanger(v)) ++hangers[d.hanger_origin[v]];
  }
  std::size_t excluded_edges = 0;
  const auto& edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& c = d.edge_class[i];
    const bool peer = edges[i].rel == RelType::kP2P;
    switch (c.kind) {
      case EdgeKind::kRing: ++(peer ? p2p : cp)[c.r]; break;
      case EdgeKind::kBridge: {
        auto& b = bridges[{c.r, c.s}];
        ++(peer ? b.first : b.second);
        break;
      }
      case EdgeKind::kHanger: break;
      case EdgeKind::kExcluded: ++excluded_edges; break;
    }
  }
  const double n = static_cast<double>(g.node_count());
  auto pct = [&](std::size_t x) { return n > 0 ? 100.0 * static_cast<double>(x) / n : 0.0; };
  out << std::fixed << std::setprecision(2);
  out << "# nodes " << g.node_count() << " edges " << g.edge_count() << " core "
      << d.core.size() << " unreachable " << d.unreachable.size() << " isolated_pairs "
      << d.isolated_pairs.size() << " excluded_edges " << excluded_edges << '\n';
  out << "# rings\n# ring\tnodes\tpercent\tp2p\tcp\n";
  for (int r = 0; r <= top; ++r) {
    out << r << '\t' << nodes[r] << '\t' << pct(nodes[r]) << '\t' << p2p[r] << '\t' << cp[r]
        << '\n';
  }
  out << "# hangers\n# origin\tnodes\tpercent\n";
  for (int r = 0; r <= top; ++r) {
    out << r << '\t' << hangers[r] << '\t' << pct(hangers[r]) << '\n';
  }
  out << "# bridges\n# r\ts\tp2p\tcp\n";
  for (const auto& [rs, c] : bridges) {
    out << rs.first << '\t' << rs.second << '\t' << c.first << '\t' << c.second << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

void write_generation_report(std::ostream& out, const GenerationReport& r) {
  out << "phase\ttarget\tplaced\tretries\treduced\n";
  for (const auto& p : r.phases) {
    out << p.phase << '\t' << p.target << '\t' << p.placed << '\t' << p.retries << '\t'
        << p.quota_reductions << '\n';
  }
  out << "repair edges " << r.repair_edges << ", promotions " << r.promotions
      << ", bound exemptions " << r.bound_exemptions << ", dropped stubs " << r.dropped_stubs
      << '\n';
  for (const auto& line : r.log) out << "  " << line << '\n';
}

void write_comparison(std::ostream& out, const Comparison& c) {
  out << "metric\ta\tb\tabs_delta\trel_delta\ttolerance\tresult\n";
  for (const auto& row : c.rows) {
    out << row.metric << '\t' << row.a << '\t' << row.b << '\t' << row.abs_delta << '\t'
        << row.rel_delta << '\t' << tolerance_text(row.tolerance) << '\t'
        << (row.pass ? "pass" : "FAIL") << '\n';
  }
  out << (c.pass() ? "all within tolerance\n" : "comparison failed\n");
}

void write_plot_data(std::ostream& out, const Series& series, const std::string& metric,
                     const std::string& graph_name) {
  out << "# " << metric << ' ' << graph_name << '\n';
  out << "# k\t" << (metric == "degree-ccdf" ? "P(deg>k)" : "P(k)") << '\n';
  out << std::setprecision(17);
  for (auto [k, v] : series) out << k << '\t' << v << '\n';
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path.string());
}

}  // namespace jellyfish

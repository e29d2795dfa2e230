#ifndef JELLYFISH_IO_H_
#define JELLYFISH_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jellyfish/decomposition.h"
#include "jellyfish/generator.h"
#include "jellyfish/graph.h"
#include "jellyfish/metrics.h"
#include "jellyfish/profile.h"

namespace jellyfish {

inline constexpr int kSchemaVersion = 1;

// Relationship codes of the `a|b|code` record format.
inline constexpr int kCodePeer = 0;
inline constexpr int kCodeProvider = -1;  // a is the provider of b

struct LoadedGraph {
  AsGraph graph;
  std::vector<std::uint64_t> as_numbers;  // node id -> AS number, ascending
  std::size_t duplicates = 0;
  std::vector<std::string> warnings;
};

// Records are `a|b|code`; fields past the third are ignored, `#` starts a
// comment. AS numbers are densified in ascending order. Repeated records
// collapse with a warning.
// Throws Error{kParseError, kConflictingRelationship, kIoError}.
LoadedGraph read_graph(std::istream& in);
LoadedGraph load_graph(const std::filesystem::path& path);

// Canonical edge order. Without a side table node v is written as AS v + 1.
void write_graph(std::ostream& out, const AsGraph& g,
                 std::span<const std::uint64_t> as_numbers = {},
                 const std::string& comment = {});
void save_graph(const std::filesystem::path& path, const AsGraph& g,
                std::span<const std::uint64_t> as_numbers = {},
                const std::string& comment = {});

// JSON documents carrying "schema_version".
// Throws Error{kParseError, kSchemaVersionMismatch, kIoError}.
std::string profile_to_json(const JellyfishProfile& p);
JellyfishProfile profile_from_json(const std::string& text);
void save_profile(const std::filesystem::path& path, const JellyfishProfile& p);
JellyfishProfile load_profile(const std::filesystem::path& path);

std::string report_to_json(const MetricsReport& r);
MetricsReport report_from_json(const std::string& text);
void save_report(const std::filesystem::path& path, const MetricsReport& r);
MetricsReport load_report(const std::filesystem::path& path);

// {"metric": {"relative": x} | {"factor": x} | {"absolute": x} |
//  {"range": [lo, hi]} | {"exact": true}, ...}
Tolerances tolerances_from_json(const std::string& text);
Tolerances load_tolerances(const std::filesystem::path& path);

// Ring, hanger and bridge tallies as three `#`-headed tables.
void write_decomposition_summary(std::ostream& out, const AsGraph& g,
                                 const Decomposition& d);

void write_generation_report(std::ostream& out, const GenerationReport& r);

void write_comparison(std::ostream& out, const Comparison& c);

// Two whitespace-separated columns under a `#` header.
void write_plot_data(std::ostream& out, const Series& series,
                     const std::string& metric, const std::string& graph_name);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace jellyfish

#endif  // JELLYFISH_IO_H_

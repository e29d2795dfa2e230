#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "jellyfish/decomposition.h"
#include "jellyfish/error.h"
#include "jellyfish/generator.h"
#include "jellyfish/io.h"
#include "jellyfish/metrics.h"
#include "jellyfish/profile.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCompareFail = 3;

constexpr const char* kSeedEnv = "JELLYFISH_SEED";

using namespace jellyfish;

struct Options {
  bool quiet = false;
  std::string input;
  std::string input_b;
  std::string output;
  std::string profile;
  std::string tolerances;
  std::string metric;
  std::optional<std::size_t> nodes;
  std::optional<std::uint64_t> seed;
  double bias = GeneratorConfig{}.bias_strength;
};

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used, 0);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw CLI::ValidationError(kSeedEnv, std::string("not an integer: ") + env);
}

LoadedGraph read_input(const std::string& path, const Options& opt) {
  auto loaded = load_graph(path);
  if (!opt.quiet) {
    for (const auto& w : loaded.warnings) std::cerr << path << ": " << w << '\n';
  }
  return loaded;
}

// Writes to `path`, or standard output when it is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

MetricsReport metrics_of(const std::string& path, const Options& opt) {
  if (path.ends_with(".json")) return load_report(path);
  return compute_metrics(read_input(path, opt).graph);
}

int run_decompose(const Options& opt) {
  const auto loaded = read_input(opt.input, opt);
  const auto d = decompose(loaded.graph);
  std::ostringstream os;
  write_decomposition_summary(os, loaded.graph, d);
  emit(opt.output, os.str());
  return kExitOk;
}

int run_profile(const Options& opt) {
  const auto loaded = read_input(opt.input, opt);
  const auto d = decompose(loaded.graph);
  save_profile(opt.output, extract_profile(loaded.graph, d));
  return kExitOk;
}

int run_generate(const Options& opt) {
  const auto profile = load_profile(opt.profile);
  GeneratorConfig cfg;
  cfg.target_nodes = opt.nodes.value_or(profile.total_nodes);
  cfg.seed = opt.seed ? *opt.seed : default_seed();
  cfg.bias_strength = opt.bias;
  const auto result = generate(profile, cfg);
  save_graph(opt.output, result.graph, {},
             "generated: target_nodes " + std::to_string(cfg.target_nodes) + " seed " +
                 std::to_string(cfg.seed));
  if (!opt.quiet) write_generation_report(std::cerr, result.report);
  return kExitOk;
}

int run_metrics(const Options& opt) {
  const auto report = compute_metrics(read_input(opt.input, opt).graph);
  emit(opt.output, report_to_json(report));
  return kExitOk;
}

int run_compare(const Options& opt) {
  const auto a = metrics_of(opt.input, opt);
  const auto b = metrics_of(opt.input_b, opt);
  const auto tol = opt.tolerances.empty() ? default_tolerances() : load_tolerances(opt.tolerances);
  const auto c = compare(a, b, tol);
  write_comparison(std::cout, c);
  return c.pass() ? kExitOk : kExitCompareFail;
}

int run_plot_data(const Options& opt) {
  const auto g = read_input(opt.input, opt).graph;
  const auto series = opt.metric == "degree-ccdf" ? degree_ccdf(g) : degree_distribution(g);
  std::ostringstream os;
  write_plot_data(os, series, opt.metric, opt.input);
  emit(opt.output, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jellyfish decomposition, profiling and generation of AS-level graphs"};
  app.require_subcommand(1);
  Options opt;
  app.add_flag("-q,--quiet", opt.quiet, "Suppress warnings and the generation report");

  auto* dec = app.add_subcommand("decompose", "Ring, hanger and bridge tallies");
  dec->add_option("graph", opt.input, "AS relationship file")->required()->check(CLI::ExistingFile);
  dec->add_option("-o,--output", opt.output, "Output file (default: stdout)");

  auto* prof = app.add_subcommand("profile", "Extract a generator profile");
  prof->add_option("graph", opt.input, "AS relationship file")->required()->check(CLI::ExistingFile);
  prof->add_option("-o,--output", opt.output, "Profile JSON")->required();

  auto* gen = app.add_subcommand("generate", "Generate a graph from a profile");
  gen->add_option("--profile", opt.profile, "Profile JSON")->required()->check(CLI::ExistingFile);
  gen->add_option("--nodes", opt.nodes, "Target node count (default: profile size)");
  gen->add_option("--seed", opt.seed, std::string("Random seed (default: $") + kSeedEnv + ")");
  gen->add_option("--bias", opt.bias, "Two-provider bias strength")->check(CLI::Range(0.0, 1.0));
  gen->add_option("-o,--output", opt.output, "Output graph file")->required();

  auto* met = app.add_subcommand("metrics", "Compute the metric report");
  met->add_option("graph", opt.input, "AS relationship file")->required()->check(CLI::ExistingFile);
  met->add_option("-o,--output", opt.output, "Report JSON (default: stdout)");

  auto* cmp = app.add_subcommand("compare", "Compare two graphs or reports");
  cmp->add_option("a", opt.input, "Graph or report JSON")->required()->check(CLI::ExistingFile);
  cmp->add_option("b", opt.input_b, "Reference graph or report JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmp->add_option("--tolerances", opt.tolerances, "Tolerance JSON")->check(CLI::ExistingFile);

  auto* plot = app.add_subcommand("plot-data", "Two-column degree series");
  plot->add_option("graph", opt.input, "AS relationship file")->required()->check(CLI::ExistingFile);
  plot->add_option("--metric", opt.metric, "Series to emit")
      ->required()
      ->check(CLI::IsMember({"degree-dist", "degree-ccdf"}));
  plot->add_option("-o,--output", opt.output, "Output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*dec) return run_decompose(opt);
    if (*prof) return run_profile(opt);
    if (*gen) return run_generate(opt);
    if (*met) return run_metrics(opt);
    if (*cmp) return run_compare(opt);
    if (*plot) return run_plot_data(opt);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::kInvalidConfig ? kExitUsage : kExitData;
  }
  return kExitUsage;
}

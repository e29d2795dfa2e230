#include <algorithm>
#include <cmath>
#include <map>

#include "jellyfish/error.h"
#include "jellyfish/profile.h"
#include "jellyfish/random.h"

namespace jellyfish {

double fit_powerlaw_exponent(std::span<const std::uint32_t> degrees) {
  std::map<std::uint32_t, std::size_t> hist;
  for (std::uint32_t k : degrees) {
    if (k < 1) throw Error(ErrorCode::kDegenerateInput, "degree below 1");
    ++hist[k];
  }
  if (hist.size() < 2) {
    throw Error(ErrorCode::kDegenerateInput, "fewer than two distinct degrees");
  }
  double w_sum = 0.0, mx = 0.0, my = 0.0;
  for (const auto& [k, n] : hist) {
    const double w = static_cast<double>(n);
    w_sum += w;
    mx += w * std::log(static_cast<double>(k));
    my += w * std::log(w);
  }
  mx /= w_sum;
  my /= w_sum;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [k, n] : hist) {
    const double w = static_cast<double>(n);
    const double dx = std::log(static_cast<double>(k)) - mx;
    sxy += w * dx * (std::log(w) - my);
    sxx += w * dx * dx;
  }
  return -sxy / sxx;
}

std::vector<std::uint32_t> simulate_attachment(std::size_t nodes,
                                               std::size_t stubs, double alpha,
                                               std::uint64_t seed) {
  std::vector<std::uint32_t> deg(nodes, 0);
  if (nodes == 0) return deg;
  Rng rng(seed);
  WeightedSampler sampler(nodes);
  for (std::size_t i = 0; i < nodes; ++i) sampler.set(i, 1.0);
  for (std::size_t t = 0; t < stubs; ++t) {
    const std::size_t v = sampler.sample(rng);
    ++deg[v];
    sampler.set(v, std::pow(1.0 + deg[v], alpha));
  }
  return deg;
}

double ks_distance(std::span<const std::uint32_t> a,
                   std::span<const std::uint32_t> b) {
  std::vector<std::uint32_t> x(a.begin(), a.end());
  std::vector<std::uint32_t> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < x.size() || j < y.size()) {
    std::uint32_t k;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
      k = x[i];
    } else {
      k = y[j];
    }
    while (i < x.size() && x[i] == k) ++i;
    while (j < y.size() && y[j] == k) ++j;
    best = std::max(best, std::abs(i / nx - j / ny));
  }
  return best;
}

namespace {
constexpr std::uint64_t kRgrSimulationSeed = 0x72677266ULL;
}

double fit_rgr_coefficient(std::span<const std::uint32_t> cp_degrees) {
  const auto carrying = std::count_if(cp_degrees.begin(), cp_degrees.end(),
                                      [](std::uint32_t k) { return k > 0; });
  if (carrying < 2) {
    throw Error(ErrorCode::kDegenerateInput,
                "fewer than two nodes with CP edges");
  }
  std::size_t stubs = 0;
  for (std::uint32_t k : cp_degrees) stubs += k;
  const int steps = static_cast<int>(std::lround(kRgrGridMax / kRgrGridStep));
  double best_alpha = 0.0;
  double best_ks = 2.0;
  for (int i = 0; i <= steps; ++i) {
    const double alpha = i * kRgrGridStep;
    const auto sim =
        simulate_attachment(cp_degrees.size(), stubs, alpha, kRgrSimulationSeed);
    const double ks = ks_distance(cp_degrees, sim);
    if (ks < best_ks - 1e-12) {
      best_ks = ks;
      best_alpha = alpha;
    }
  }
  return best_alpha;
}

}  // namespace jellyfish

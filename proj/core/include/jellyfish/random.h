#ifndef JELLYFISH_RANDOM_H_
#define JELLYFISH_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace jellyfish {

inline constexpr std::uint64_t kDefaultSeed = 0x6a656c6c79ULL;

// std::mt19937_64 is fully specified by the standard; the distribution
// helpers below are written out so results do not depend on the standard
// library's distribution implementations.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). n must be > 0.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_index(rng, i)]);
  }
}

// Fenwick tree over non-negative weights: O(log n) update and
// weight-proportional sampling.
class WeightedSampler {
 public:
  WeightedSampler() = default;
  explicit WeightedSampler(std::size_t n) : tree_(n + 1, 0.0), weight_(n, 0.0) {}

  std::size_t size() const { return weight_.size(); }
  double weight(std::size_t i) const { return weight_[i]; }
  bool any() const { return positive_ > 0; }

  void set(std::size_t i, double w) {
    const double delta = w - weight_[i];
    if (delta == 0.0) return;
    if (weight_[i] > 0.0) --positive_;
    if (w > 0.0) ++positive_;
    weight_[i] = w;
    for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) {
      tree_[k] += delta;
    }
  }

  double total() const {
    double s = 0.0;
    for (std::size_t k = size(); k > 0; k -= k & (~k + 1)) s += tree_[k];
    return s;
  }

  // Returns size() when every weight is zero.
  std::size_t sample(Rng& rng) const {
    if (positive_ == 0) return size();
    const double t = total();
    double target = uniform01(rng) * t;
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 <= size()) step *= 2;
    for (; step > 0; step /= 2) {
      const std::size_t next = pos + step;
      if (next <= size() && tree_[next] <= target) {
        pos = next;
        target -= tree_[next];
      }
    }
    // Accumulated rounding can land on a zero-weight slot; walk to the
    // nearest positive one.
    if (pos >= size()) pos = size() - 1;
    if (weight_[pos] > 0.0) return pos;
    for (std::size_t j = pos; j-- > 0;) {
      if (weight_[j] > 0.0) return j;
    }
    for (std::size_t j = pos + 1; j < size(); ++j) {
      if (weight_[j] > 0.0) return j;
    }
    return size();
  }

 private:
  std::vector<double> tree_;
  std::vector<double> weight_;
  std::size_t positive_ = 0;
};

}  // namespace jellyfish

#endif  // JELLYFISH_RANDOM_H_

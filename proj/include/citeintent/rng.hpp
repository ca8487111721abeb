#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace citeintent {

// Deterministic RNG helpers. std::uniform_int_distribution and friends are
// implementation-defined, so all draws here go through fully specified
// mt19937 output to keep results identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(static_cast<std::uint32_t>(seed ^ (seed >> 32))) {}

  // Unbiased draw in [0, n) via rejection sampling.
  std::uint32_t below(std::uint32_t n) {
    if (n == 0) return 0;
    const std::uint64_t span = std::uint64_t{1} << 32;
    const std::uint64_t threshold = span - span % n;
    while (true) {
      std::uint64_t r = gen_();
      if (r < threshold) return static_cast<std::uint32_t>(r % n);
    }
  }

  // Uniform double in [0, 1) with 32 bits of resolution.
  double uniform() { return static_cast<double>(gen_()) * (1.0 / 4294967296.0); }

  // Uniform double in [-r, r).
  double symmetric(double r) { return (uniform() * 2.0 - 1.0) * r; }

  // In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(static_cast<std::uint32_t>(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Selects k distinct indices from [0, n), returned in ascending order.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937 gen_;
};

}  // namespace citeintent

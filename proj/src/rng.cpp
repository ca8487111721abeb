#include "citeintent/rng.hpp"

#include <algorithm>
#include <numeric>

namespace citeintent {

std::vector<std::size_t> Rng::sample_indices(std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (k >= n) return idx;
  // Partial Fisher-Yates: the first k slots end up holding the sample.
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + below(static_cast<std::uint32_t>(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace citeintent

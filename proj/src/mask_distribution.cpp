#include "citeintent/mask_distribution.hpp"

#include <cmath>
#include <cstddef>

#include "citeintent/errors.hpp"

namespace citeintent {

double MaskDistribution::prob_of(const std::string& word) const {
  if (!vocab) throw ModelError("mask distribution has no vocabulary");
  auto resolved = vocab->resolve(word);
  if (!resolved) return 0.0;
  return probs.at(resolved->id);
}

void MaskDistribution::validate() const {
  if (!vocab) throw ModelError("mask distribution has no vocabulary");
  if (probs.size() != vocab->size()) {
    throw ModelError("mask distribution size does not match vocabulary size");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    double p = probs[i];
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ModelError("mask distribution has a negative or non-finite entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw ModelError("mask distribution does not sum to one");
  }
}

}  // namespace citeintent

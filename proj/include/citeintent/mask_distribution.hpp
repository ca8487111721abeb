#pragma once

#include <string>
#include <vector>

#include "citeintent/vocab.hpp"

namespace citeintent {

// Probability distribution over a vocabulary at one mask position.
struct MaskDistribution {
  std::vector<double> probs;  // one entry per vocabulary id
  VocabularyPtr vocab;

  // Probability mass of a word, resolving subwords to their first piece.
  // Words absent from the vocabulary carry zero mass.
  double prob_of(const std::string& word) const;

  // Checks shape, non-negativity and unit mass (tolerance 1e-6); throws
  // ModelError on violation.
  void validate() const;
};

}  // namespace citeintent

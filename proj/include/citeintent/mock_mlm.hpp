#pragma once

#include <string>
#include <vector>

#include "citeintent/mlm.hpp"

namespace citeintent {

// Deterministic stand-in model: the mask distribution is the smoothed
// frequency of each vocabulary word among the prompt's own tokens. Words the
// prompt mentions gain mass, so cue words steer predictions — enough to
// exercise every pipeline stage without real weights.
class MockMlm : public MaskedLanguageModel {
 public:
  explicit MockMlm(VocabularyPtr vocab, double smoothing = 0.1);

  std::string identity() const override;
  std::size_t max_sequence_length() const override { return 128; }
  VocabularyPtr vocabulary() const override { return vocab_; }
  std::vector<std::size_t> tokenize(const std::string& text) const override;
  MaskDistribution distribution_at(const std::vector<std::size_t>& tokens,
                                   std::size_t mask_index) override;
  std::string state_hash() const override;

 private:
  VocabularyPtr vocab_;
  double smoothing_;
};

// Word list shared by the weightless backends: anchor words for both built-in
// schemas, template glue, and common scientific-prose words.
std::vector<std::string> builtin_vocabulary_words();

}  // namespace citeintent

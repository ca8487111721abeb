#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "citeintent/mask_distribution.hpp"
#include "citeintent/prompt_template.hpp"
#include "citeintent/vocab.hpp"

namespace citeintent {

// A prompt converted to model token ids. The id stored at mask_index is a
// placeholder (0); backends must key off mask_index, never off that value.
struct TokenizedPrompt {
  std::vector<std::size_t> token_ids;
  std::size_t mask_index;
};

// Port over any masked language model that can score a cloze position.
// Implementations must be deterministic for fixed state and input, and must
// report max_sequence_length() >= 16.
class MaskedLanguageModel {
 public:
  virtual ~MaskedLanguageModel() = default;

  // Stable name for this backend + configuration (not its mutable state).
  virtual std::string identity() const = 0;
  virtual std::size_t max_sequence_length() const = 0;
  virtual bool trainable() const { return false; }
  virtual VocabularyPtr vocabulary() const = 0;

  // Maps a literal text span to token ids; never returns a mask slot.
  virtual std::vector<std::size_t> tokenize(const std::string& text) const = 0;

  // Distribution over the vocabulary at the mask position.
  virtual MaskDistribution distribution_at(const std::vector<std::size_t>& tokens,
                                           std::size_t mask_index) = 0;

  // Digest of all mutable parameters; equal hashes mean equal behaviour.
  virtual std::string state_hash() const = 0;
};

// Extension for backends that support gradient updates. forward_train
// retains whatever activations the following backward_step needs; callers
// must pair the two without interleaving other batches.
class TrainableMlm : public MaskedLanguageModel {
 public:
  bool trainable() const override { return true; }

  // Mask-position probability vectors for each prompt in the batch.
  virtual std::vector<std::vector<double>> forward_train(
      const std::vector<TokenizedPrompt>& batch) = 0;

  // Applies one optimizer step from the loss gradient w.r.t. each
  // probability vector returned by the preceding forward_train.
  virtual void backward_step(const std::vector<std::vector<double>>& grad_probs,
                             double learning_rate) = 0;

  virtual void save_checkpoint(const std::string& path) const = 0;
};

using MlmPtr = std::unique_ptr<MaskedLanguageModel>;

// Tokenizes a rendered prompt for a model. Prompts longer than the budget
// (the smaller of max_len_override, if nonzero, and the model maximum) are
// shortened by dropping tokens from the front of the citation text only; the
// template tokens and the mask always survive. Throws UsageError when the
// template alone exceeds the budget.
TokenizedPrompt tokenize_prompt(const MaskedLanguageModel& mlm, const RenderedPrompt& prompt,
                                std::size_t max_len_override = 0);

// Tokenizes, truncates and queries the model in one step.
MaskDistribution predict_mask(MaskedLanguageModel& mlm, const RenderedPrompt& prompt,
                              std::size_t max_len_override = 0);

}  // namespace citeintent

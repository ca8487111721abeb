#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "citeintent/mlm.hpp"

namespace citeintent {

// Small differentiable backend: a linear map from the prompt's bag-of-words
// context to mask logits, softmaxed over the vocabulary. Big enough to carry
// real gradients end to end, small enough to finite-difference check.
class ToyDiffMlm : public TrainableMlm {
 public:
  // Fresh model with symmetric-uniform initialized parameters.
  ToyDiffMlm(VocabularyPtr vocab, std::uint64_t seed);

  static std::unique_ptr<ToyDiffMlm> load(const std::string& checkpoint_path);

  std::string identity() const override;
  std::size_t max_sequence_length() const override { return 128; }
  VocabularyPtr vocabulary() const override { return vocab_; }
  std::vector<std::size_t> tokenize(const std::string& text) const override;
  MaskDistribution distribution_at(const std::vector<std::size_t>& tokens,
                                   std::size_t mask_index) override;
  std::string state_hash() const override;

  std::vector<std::vector<double>> forward_train(
      const std::vector<TokenizedPrompt>& batch) override;
  void backward_step(const std::vector<std::vector<double>>& grad_probs,
                     double learning_rate) override;
  void save_checkpoint(const std::string& path) const override;

  // Parameter gradients for a batch and upstream dL/dp, without applying an
  // update; the pure core of backward_step, exposed for gradient checks.
  struct Gradients {
    std::vector<double> weight_grad;  // row-major vocab x vocab
    std::vector<double> bias_grad;
  };
  Gradients gradients(const std::vector<TokenizedPrompt>& batch,
                      const std::vector<std::vector<double>>& grad_probs) const;

  // Direct parameter access for diagnostics and finite-difference probes.
  double& weight_at(std::size_t row, std::size_t col);
  double& bias_at(std::size_t row);

 private:
  ToyDiffMlm() = default;

  std::vector<double> context_of(const std::vector<std::size_t>& tokens,
                                 std::size_t mask_index) const;
  std::vector<double> forward_probs(const std::vector<double>& context) const;

  VocabularyPtr vocab_;
  std::size_t dim_ = 0;
  std::vector<double> weights_;  // row-major dim x dim
  std::vector<double> bias_;

  // Adaptive-moment optimizer state.
  std::uint64_t adam_step_ = 0;
  std::vector<double> m_weights_, v_weights_, m_bias_, v_bias_;

  std::vector<TokenizedPrompt> pending_batch_;  // set by forward_train
};

}  // namespace citeintent

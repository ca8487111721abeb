#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "citeintent/mlm.hpp"

namespace citeintent {

// Client side of a model served over HTTP — how real transformer backbones
// plug into the pipeline without linking an inference runtime here.
//
// Server contract (JSON bodies):
//   GET  /info               -> {"identity", "max_sequence_length", "trainable"}
//   GET  /vocab              -> {"words": [...]}
//   GET  /state_hash         -> {"state_hash"}
//   POST /tokenize           {"text"} -> {"tokens": [...]}
//   POST /mask_distribution  {"tokens", "mask_index"} -> {"probs": [...]}
//   POST /train/begin        {"seed"} -> {}            (deterministic re-init)
//   POST /train/forward      {"batch": [{"tokens", "mask_index"}]} -> {"probs": [[...]]}
//   POST /train/backward     {"grad_probs", "learning_rate"} -> {}
//   POST /save               {"path"} -> {}            (server-side checkpoint)
class HttpMlm : public TrainableMlm {
 public:
  explicit HttpMlm(const std::string& base_url);
  ~HttpMlm() override;

  std::string identity() const override;
  std::size_t max_sequence_length() const override;
  bool trainable() const override;
  VocabularyPtr vocabulary() const override;
  std::vector<std::size_t> tokenize(const std::string& text) const override;
  MaskDistribution distribution_at(const std::vector<std::size_t>& tokens,
                                   std::size_t mask_index) override;
  std::string state_hash() const override;

  std::vector<std::vector<double>> forward_train(
      const std::vector<TokenizedPrompt>& batch) override;
  void backward_step(const std::vector<std::vector<double>>& grad_probs,
                     double learning_rate) override;
  void save_checkpoint(const std::string& path) const override;

  // Asks the server to re-initialize its parameters for a fresh seeded run.
  void begin_run(std::uint64_t seed);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace citeintent

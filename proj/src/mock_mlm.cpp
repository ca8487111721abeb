#include "citeintent/mock_mlm.hpp"

#include "citeintent/errors.hpp"
#include "citeintent/hash.hpp"
#include "citeintent/text.hpp"

namespace citeintent {

MockMlm::MockMlm(VocabularyPtr vocab, double smoothing)
    : vocab_(std::move(vocab)), smoothing_(smoothing) {
  if (!vocab_) throw ModelError("mock model needs a vocabulary");
  if (!(smoothing_ > 0.0)) throw ModelError("mock smoothing must be positive");
}

std::string MockMlm::identity() const {
  std::uint64_t h = fnv1a("mock");
  for (const auto& word : vocab_->words()) h = fnv1a(word, h);
  h = fnv1a_double(smoothing_, h);
  return "mock/" + hash_hex(h).substr(0, 8);
}

std::vector<std::size_t> MockMlm::tokenize(const std::string& text) const {
  std::vector<std::size_t> out;
  for (const auto& token : alpha_tokens(text, 1, false)) {
    if (auto resolved = vocab_->resolve(token)) out.push_back(resolved->id);
  }
  return out;
}

MaskDistribution MockMlm::distribution_at(const std::vector<std::size_t>& tokens,
                                          std::size_t mask_index) {
  if (mask_index >= tokens.size()) throw ModelError("mask index outside the token sequence");
  MaskDistribution dist;
  dist.vocab = vocab_;
  dist.probs.assign(vocab_->size(), smoothing_);
  double total = smoothing_ * static_cast<double>(vocab_->size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i == mask_index) continue;
    if (tokens[i] >= vocab_->size()) throw ModelError("token id outside the vocabulary");
    dist.probs[tokens[i]] += 1.0;
    total += 1.0;
  }
  for (auto& p : dist.probs) p /= total;
  return dist;
}

std::string MockMlm::state_hash() const { return identity(); }

std::vector<std::string> builtin_vocabulary_words() {
  return {
      // anchor words of the shipped table
      "background", "prior", "context", "technique", "procedure", "method", "result",
      "comparison", "outcome", "motivation", "need", "inspiration", "extension",
      "improvement", "use", "usage", "application", "contrast", "difference", "future",
      "prospect",
      // template glue
      "it", "has", "a", "citation", "of", "type", "the", "in", "is", "we", "this", "to",
      "and", "as", "for", "with", "our", "are", "on", "by", "been", "have",
      // scientific prose
      "model", "data", "algorithm", "approach", "experiment", "evaluation", "analysis",
      "performance", "accuracy", "training", "test", "baseline", "dataset", "paper",
      "work", "study", "research", "task", "feature", "system", "learning", "language",
      "show", "shown", "propose", "proposed", "compare", "compared", "extend", "apply",
      "applied", "measure", "measured", "report", "reported", "improve", "improved",
      "build", "derive", "follow", "same", "features", "results", "methods",
  };
}

}  // namespace citeintent

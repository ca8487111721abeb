#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace citeintent {

struct WordVector {
  std::string word;
  std::vector<double> components;

  double norm() const;
};

double cosine(const WordVector& a, const WordVector& b);

// Read-only after load; all lookups are pure.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string id() const = 0;
  virtual std::size_t dimension() const = 0;

  // nullopt for out-of-vocabulary words.
  virtual std::optional<WordVector> embed(const std::string& word) const = 0;
};

using EmbeddingProviderPtr = std::shared_ptr<const EmbeddingProvider>;

// Fixed table of vectors, used by unit tests and toy pipelines.
class InMemoryEmbedding : public EmbeddingProvider {
 public:
  InMemoryEmbedding(std::string id, std::map<std::string, std::vector<double>> table);

  std::string id() const override { return id_; }
  std::size_t dimension() const override { return dimension_; }
  std::optional<WordVector> embed(const std::string& word) const override;

 private:
  std::string id_;
  std::size_t dimension_;
  std::map<std::string, std::vector<double>> table_;
};

// Loads the standard "word v1 v2 ..." text format, one word per line, with an
// optional leading "count dim" header.
EmbeddingProviderPtr load_text_embedding(const std::string& path);

// The k candidates most cosine-similar to the anchor, descending, ties broken
// lexicographically. Unembeddable or zero-norm candidates are skipped;
// candidates must be deduplicated by the caller.
std::vector<std::string> top_k_similar(const EmbeddingProvider& provider,
                                       const std::string& anchor,
                                       const std::vector<std::string>& candidates, std::size_t k);

}  // namespace citeintent

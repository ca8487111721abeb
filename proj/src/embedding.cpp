#include "citeintent/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "citeintent/errors.hpp"
#include "citeintent/hash.hpp"
#include "citeintent/text.hpp"

namespace citeintent {

double WordVector::norm() const {
  double ss = 0.0;
  for (double c : components) ss += c * c;
  return std::sqrt(ss);
}

double cosine(const WordVector& a, const WordVector& b) {
  if (a.components.size() != b.components.size()) {
    throw ModelError("cosine: dimension mismatch (" + std::to_string(a.components.size()) + " vs " +
                     std::to_string(b.components.size()) + ")");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    dot += a.components[i] * b.components[i];
    na += a.components[i] * a.components[i];
    nb += b.components[i] * b.components[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw ModelError("cosine: zero-norm vector for '" + (na == 0.0 ? a.word : b.word) + "'");
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

InMemoryEmbedding::InMemoryEmbedding(std::string id,
                                     std::map<std::string, std::vector<double>> table)
    : id_(std::move(id)), dimension_(0), table_(std::move(table)) {
  for (const auto& [word, vec] : table_) {
    if (dimension_ == 0) dimension_ = vec.size();
    if (vec.size() != dimension_) {
      throw ModelError("embedding table: inconsistent dimension for '" + word + "'");
    }
  }
  if (dimension_ == 0) throw ModelError("embedding table is empty");
}

std::optional<WordVector> InMemoryEmbedding::embed(const std::string& word) const {
  auto it = table_.find(word);
  if (it == table_.end()) return std::nullopt;
  return WordVector{word, it->second};
}

EmbeddingProviderPtr load_text_embedding(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open vectors file: " + path);

  std::map<std::string, std::vector<double>> table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t declared_dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream iss(line);
    std::string word;
    iss >> word;
    std::vector<double> vec;
    double v;
    while (iss >> v) vec.push_back(v);

    // Optional "count dim" header: first line, numeric word, exactly one value.
    if (line_no == 1 && vec.size() == 1 &&
        word.find_first_not_of("0123456789") == std::string::npos) {
      declared_dim = static_cast<std::size_t>(vec[0]);
      continue;
    }
    if (vec.empty()) {
      throw ModelError(path + ":" + std::to_string(line_no) + ": vector row without components");
    }
    if (declared_dim != 0 && vec.size() != declared_dim) {
      throw ModelError(path + ":" + std::to_string(line_no) + ": expected dimension " +
                       std::to_string(declared_dim) + ", got " + std::to_string(vec.size()));
    }
    table[word] = std::move(vec);
  }
  if (table.empty()) throw ModelError("vectors file has no entries: " + path);

  std::string id = "vectors:" + path;
  return std::make_shared<InMemoryEmbedding>(id, std::move(table));
}

std::vector<std::string> top_k_similar(const EmbeddingProvider& provider, const std::string& anchor,
                                       const std::vector<std::string>& candidates, std::size_t k) {
  if (k == 0) throw UsageError("top_k_similar: k must be positive");
  auto anchor_vec = provider.embed(anchor);
  if (!anchor_vec || anchor_vec->norm() == 0.0) {
    throw ModelError("anchor word '" + anchor + "' is not embeddable by provider " + provider.id());
  }

  std::vector<std::pair<double, std::string>> scored;
  scored.reserve(candidates.size());
  for (const std::string& candidate : candidates) {
    auto vec = provider.embed(candidate);
    if (!vec || vec->norm() == 0.0) continue;
    scored.emplace_back(cosine(*anchor_vec, *vec), candidate);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  if (scored.size() > k) scored.resize(k);

  std::vector<std::string> out;
  out.reserve(scored.size());
  for (auto& [sim, word] : scored) out.push_back(std::move(word));
  return out;
}

}  // namespace citeintent

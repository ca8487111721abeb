#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace citeintent {

struct ResolvedWord {
  std::size_t id;
  bool multi_piece;  // word was not a whole vocabulary item; id is its first piece
};

// Immutable word<->id table shared by a model and its mask distributions.
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<std::string> words);

  std::size_t size() const { return words_.size(); }
  const std::string& word(std::size_t id) const { return words_.at(id); }
  const std::vector<std::string>& words() const { return words_; }

  std::optional<std::size_t> exact_id(const std::string& word) const;

  // Whole-word match first; otherwise the longest prefix present in the
  // vocabulary (the first piece a greedy subword tokenizer would emit),
  // flagged multi_piece. Empty or unmatched words resolve to nullopt.
  std::optional<ResolvedWord> resolve(const std::string& word) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

// Reads a one-word-per-line vocabulary file.
VocabularyPtr load_vocabulary(const std::string& path);

}  // namespace citeintent

#include "citeintent/vocab.hpp"

#include <fstream>

#include "citeintent/errors.hpp"

namespace citeintent {

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  if (words_.empty()) throw ModelError("vocabulary is empty");
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i].empty()) throw ModelError("vocabulary contains an empty entry");
    if (!index_.emplace(words_[i], i).second) {
      throw ModelError("vocabulary contains duplicate entry '" + words_[i] + "'");
    }
  }
}

std::optional<std::size_t> Vocabulary::exact_id(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<ResolvedWord> Vocabulary::resolve(const std::string& word) const {
  if (word.empty()) return std::nullopt;
  if (auto id = exact_id(word)) return ResolvedWord{*id, false};
  for (std::size_t len = word.size() - 1; len >= 1; --len) {
    auto it = index_.find(word.substr(0, len));
    if (it != index_.end()) return ResolvedWord{it->second, true};
  }
  return std::nullopt;
}

VocabularyPtr load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open vocabulary file: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return std::make_shared<Vocabulary>(std::move(words));
}

}  // namespace citeintent

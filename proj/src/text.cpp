#include "citeintent/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace citeintent {

namespace {

bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

const std::unordered_set<std::string_view>& stopword_set() {
  static const std::unordered_set<std::string_view> kStopwords = {
      "the",   "and",    "for",    "are",    "but",   "not",     "you",    "all",
      "any",   "can",    "had",    "her",    "was",   "one",     "our",    "out",
      "day",   "get",    "has",    "him",    "his",   "how",     "man",    "new",
      "now",   "old",    "see",    "two",    "way",   "who",     "boy",    "did",
      "its",   "let",    "put",    "say",    "she",   "too",     "use",    "that",
      "with",  "have",   "this",   "will",   "they",  "from",    "been",   "were",
      "said",  "each",   "which",  "their",  "time",  "would",   "there",  "what",
      "about", "more",   "when",   "your",   "them",  "these",   "than",   "then",
      "some",  "into",   "only",   "other",  "such",  "over",    "also",   "after",
      "most",  "made",   "where",  "much",   "both",  "between", "under",  "while",
      "being", "before", "very",   "should", "could", "does",    "doing",  "here",
      "those", "same",   "itself", "because", "through", "during", "above", "below",
      "again", "further", "once",  "down",   "until",  "upon",   "against", "among",
      "within", "without", "however", "therefore", "thus", "hence", "since",
      "may",   "might",  "must",   "shall",  "onto",  "via",     "per",    "etc"};
  return kStopwords;
}

}  // namespace

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_ws = true;  // leading whitespace is dropped
  for (char c : text) {
    if (is_ws(c)) {
      in_ws = true;
    } else {
      if (in_ws && !out.empty()) out.push_back(' ');
      out.push_back(c);
      in_ws = false;
    }
  }
  return out;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ws(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_ws(text[i])) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

bool is_stopword(std::string_view word) { return stopword_set().count(word) > 0; }

std::vector<std::string> alpha_tokens(std::string_view text, std::size_t min_len,
                                      bool drop_stopwords) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= min_len && (!drop_stopwords || !is_stopword(cur))) out.push_back(cur);
    cur.clear();
  };
  for (char c : text) {
    unsigned char uc = static_cast<unsigned char>(c);
    if (std::isalpha(uc)) {
      cur.push_back(static_cast<char>(std::tolower(uc)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

}  // namespace citeintent

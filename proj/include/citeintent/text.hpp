#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace citeintent {

// Collapses runs of whitespace to single spaces and strips both ends.
std::string normalize_whitespace(std::string_view text);

std::string to_lower(std::string_view text);

// Splits on whitespace.
std::vector<std::string> split_ws(std::string_view text);

// Corpus-word tokenization: split on non-alphabetic characters, lowercase,
// keep tokens of length >= min_len that are not stopwords.
std::vector<std::string> alpha_tokens(std::string_view text, std::size_t min_len = 3,
                                      bool drop_stopwords = true);

bool is_stopword(std::string_view word);

// Minimum token length used by alpha_tokens when building corpora.
inline constexpr std::size_t kCorpusTokenMinLen = 3;

}  // namespace citeintent

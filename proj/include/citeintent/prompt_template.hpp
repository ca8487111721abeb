#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace citeintent {

// One span of a rendered prompt. The mask is kept as a distinct piece so the
// model layer can locate it after tokenization and truncation.
struct PromptPiece {
  enum class Kind { kLiteral, kInput, kMask };
  Kind kind;
  std::string text;  // empty for kMask
};

// A prompt after substituting one citation sentence into a template.
struct RenderedPrompt {
  std::vector<PromptPiece> pieces;

  // Full surface string with the mask shown as its placeholder token.
  std::string text(const std::string& mask_token = "[MASK]") const;
};

// A cloze template with exactly one input slot [X] and one mask slot [MASK].
// Prefix templates keep the citation sentence before the mask, which lets
// front-truncation of long inputs leave the mask intact.
class PromptTemplate {
 public:
  // Parses a pattern such as "[X] It has a citation of type [MASK]."
  // Throws UsageError unless it contains exactly one [X] and one [MASK],
  // with the mask after the input slot.
  explicit PromptTemplate(std::string pattern);

  const std::string& pattern() const { return pattern_; }

  // Substitutes the citation sentence verbatim into the input slot.
  RenderedPrompt render(const std::string& citation_text) const;

 private:
  std::string pattern_;
  std::string before_;   // text before [X]
  std::string between_;  // text between [X] and [MASK]
  std::string after_;    // text after [MASK]
};

// The template used throughout: the citation sentence followed by a cloze
// phrase naming its citation type.
const PromptTemplate& default_template();

}  // namespace citeintent

#include "citeintent/prompt_template.hpp"

#include "citeintent/errors.hpp"

namespace citeintent {

namespace {

constexpr const char* kInputSlot = "[X]";
constexpr const char* kMaskSlot = "[MASK]";

// Position of the single occurrence of `slot`, or npos if absent/duplicated.
std::size_t find_single(const std::string& pattern, const std::string& slot) {
  std::size_t first = pattern.find(slot);
  if (first == std::string::npos) return std::string::npos;
  if (pattern.find(slot, first + slot.size()) != std::string::npos) {
    return std::string::npos;
  }
  return first;
}

}  // namespace

std::string RenderedPrompt::text(const std::string& mask_token) const {
  std::string out;
  for (const auto& piece : pieces) {
    out += piece.kind == PromptPiece::Kind::kMask ? mask_token : piece.text;
  }
  return out;
}

PromptTemplate::PromptTemplate(std::string pattern) : pattern_(std::move(pattern)) {
  std::size_t input_pos = find_single(pattern_, kInputSlot);
  std::size_t mask_pos = find_single(pattern_, kMaskSlot);
  if (input_pos == std::string::npos) {
    throw UsageError("template must contain exactly one [X] slot: " + pattern_);
  }
  if (mask_pos == std::string::npos) {
    throw UsageError("template must contain exactly one [MASK] slot: " + pattern_);
  }
  if (mask_pos < input_pos) {
    throw UsageError("template must place [MASK] after [X]: " + pattern_);
  }
  before_ = pattern_.substr(0, input_pos);
  std::size_t between_start = input_pos + std::string(kInputSlot).size();
  between_ = pattern_.substr(between_start, mask_pos - between_start);
  after_ = pattern_.substr(mask_pos + std::string(kMaskSlot).size());
}

RenderedPrompt PromptTemplate::render(const std::string& citation_text) const {
  RenderedPrompt out;
  if (!before_.empty()) {
    out.pieces.push_back({PromptPiece::Kind::kLiteral, before_});
  }
  out.pieces.push_back({PromptPiece::Kind::kInput, citation_text});
  if (!between_.empty()) {
    out.pieces.push_back({PromptPiece::Kind::kLiteral, between_});
  }
  out.pieces.push_back({PromptPiece::Kind::kMask, ""});
  if (!after_.empty()) {
    out.pieces.push_back({PromptPiece::Kind::kLiteral, after_});
  }
  return out;
}

const PromptTemplate& default_template() {
  static const PromptTemplate t("[X] It has a citation of type [MASK].");
  return t;
}

}  // namespace citeintent

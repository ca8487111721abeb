#include "citeintent/mlm.hpp"

#include <algorithm>

#include "citeintent/errors.hpp"

namespace citeintent {

namespace {
constexpr std::size_t kMaskPlaceholderId = 0;
constexpr std::size_t kMinSequenceLength = 16;
}  // namespace

TokenizedPrompt tokenize_prompt(const MaskedLanguageModel& mlm, const RenderedPrompt& prompt,
                                std::size_t max_len_override) {
  if (mlm.max_sequence_length() < kMinSequenceLength) {
    throw ModelError("model reports a sequence budget below the supported minimum");
  }
  std::size_t budget = mlm.max_sequence_length();
  if (max_len_override > 0) budget = std::min(budget, max_len_override);

  // Tokenize each piece separately so the input span can be trimmed alone.
  std::vector<std::size_t> input_ids;
  std::vector<std::vector<std::size_t>> segments;  // per piece; mask/input empty
  std::size_t input_piece = prompt.pieces.size();
  std::size_t mask_piece = prompt.pieces.size();
  for (std::size_t i = 0; i < prompt.pieces.size(); ++i) {
    const auto& piece = prompt.pieces[i];
    switch (piece.kind) {
      case PromptPiece::Kind::kLiteral:
        segments.push_back(mlm.tokenize(piece.text));
        break;
      case PromptPiece::Kind::kInput:
        input_piece = i;
        input_ids = mlm.tokenize(piece.text);
        segments.emplace_back();
        break;
      case PromptPiece::Kind::kMask:
        mask_piece = i;
        segments.emplace_back();
        break;
    }
  }
  if (mask_piece == prompt.pieces.size()) {
    throw UsageError("rendered prompt has no mask position");
  }

  std::size_t overhead = 1;  // the mask itself
  for (const auto& seg : segments) overhead += seg.size();
  if (overhead > budget) {
    throw UsageError("template tokens alone exceed the model sequence budget");
  }
  std::size_t total = overhead + input_ids.size();
  std::size_t drop = total > budget ? total - budget : 0;
  // Trim the oldest citation tokens; the sentence tail sits next to the cloze
  // phrase and carries the cue words.
  if (drop > 0) input_ids.erase(input_ids.begin(), input_ids.begin() + drop);

  TokenizedPrompt out;
  out.token_ids.reserve(budget);
  out.mask_index = 0;
  for (std::size_t i = 0; i < prompt.pieces.size(); ++i) {
    if (i == mask_piece) {
      out.mask_index = out.token_ids.size();
      out.token_ids.push_back(kMaskPlaceholderId);
    } else if (i == input_piece) {
      out.token_ids.insert(out.token_ids.end(), input_ids.begin(), input_ids.end());
    } else {
      out.token_ids.insert(out.token_ids.end(), segments[i].begin(), segments[i].end());
    }
  }
  if (out.mask_index >= out.token_ids.size()) {
    throw ModelError("mask position fell outside the tokenized prompt");
  }
  return out;
}

MaskDistribution predict_mask(MaskedLanguageModel& mlm, const RenderedPrompt& prompt,
                              std::size_t max_len_override) {
  TokenizedPrompt tokens = tokenize_prompt(mlm, prompt, max_len_override);
  MaskDistribution dist = mlm.distribution_at(tokens.token_ids, tokens.mask_index);
  dist.validate();
  return dist;
}

}  // namespace citeintent

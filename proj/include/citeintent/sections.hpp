#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "citeintent/labels.hpp"

namespace citeintent {

// The eight canonical paper sections the knowledge base is built over.
enum class CanonicalSection {
  kIntroduction,
  kRelatedWork,
  kMotivation,
  kMethodology,
  kEvaluation,
  kResults,
  kDiscussion,
  kConclusion,
};

inline constexpr std::size_t kNumSections = 8;

constexpr std::array<CanonicalSection, kNumSections> all_sections() {
  return {CanonicalSection::kIntroduction, CanonicalSection::kRelatedWork,
          CanonicalSection::kMotivation,   CanonicalSection::kMethodology,
          CanonicalSection::kEvaluation,   CanonicalSection::kResults,
          CanonicalSection::kDiscussion,   CanonicalSection::kConclusion};
}

std::string section_name(CanonicalSection section);
std::optional<CanonicalSection> section_from_name(const std::string& name);

// Case-insensitive match of a free-form heading against the alias table,
// after stripping leading enumeration ("3.", "IV)", "A."). Returns nullopt
// when no alias matches.
std::optional<CanonicalSection> normalize_section_name(const std::string& raw);

// Label -> sections where that label's citations are most used.
using LabelSectionMap = std::map<Label, std::set<CanonicalSection>>;

// The shipped mapping for the built-in schemas.
LabelSectionMap default_section_map(const LabelSchema& schema);

// Loads a custom map from JSON: {"label": ["section", ...], ...}.
LabelSectionMap load_section_map(const std::string& path, const LabelSchema& schema);

void validate_section_map(const LabelSectionMap& map, const LabelSchema& schema);

}  // namespace citeintent

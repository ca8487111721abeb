#include "citeintent/sections.hpp"

#include <fstream>
#include <unordered_map>

#include "json.hpp"

#include "citeintent/errors.hpp"
#include "citeintent/text.hpp"

namespace citeintent {

std::string section_name(CanonicalSection section) {
  switch (section) {
    case CanonicalSection::kIntroduction: return "introduction";
    case CanonicalSection::kRelatedWork: return "related_work";
    case CanonicalSection::kMotivation: return "motivation";
    case CanonicalSection::kMethodology: return "methodology";
    case CanonicalSection::kEvaluation: return "evaluation";
    case CanonicalSection::kResults: return "results";
    case CanonicalSection::kDiscussion: return "discussion";
    case CanonicalSection::kConclusion: return "conclusion";
  }
  return "introduction";
}

std::optional<CanonicalSection> section_from_name(const std::string& name) {
  for (CanonicalSection s : all_sections()) {
    if (section_name(s) == name) return s;
  }
  return std::nullopt;
}

namespace {

const std::unordered_map<std::string, CanonicalSection>& section_alias_table() {
  using S = CanonicalSection;
  static const std::unordered_map<std::string, CanonicalSection> kAliases = {
      {"introduction", S::kIntroduction},
      {"intro", S::kIntroduction},
      {"overview", S::kIntroduction},
      {"background", S::kIntroduction},
      {"related work", S::kRelatedWork},
      {"related works", S::kRelatedWork},
      {"related research", S::kRelatedWork},
      {"previous work", S::kRelatedWork},
      {"prior work", S::kRelatedWork},
      {"literature review", S::kRelatedWork},
      {"state of the art", S::kRelatedWork},
      {"background and related work", S::kRelatedWork},
      {"motivation", S::kMotivation},
      {"motivations", S::kMotivation},
      {"problem statement", S::kMotivation},
      {"problem definition", S::kMotivation},
      {"methodology", S::kMethodology},
      {"method", S::kMethodology},
      {"methods", S::kMethodology},
      {"approach", S::kMethodology},
      {"our approach", S::kMethodology},
      {"proposed method", S::kMethodology},
      {"proposed approach", S::kMethodology},
      {"model", S::kMethodology},
      {"models", S::kMethodology},
      {"materials and methods", S::kMethodology},
      {"system description", S::kMethodology},
      {"system overview", S::kMethodology},
      {"implementation", S::kMethodology},
      {"architecture", S::kMethodology},
      {"evaluation", S::kEvaluation},
      {"evaluations", S::kEvaluation},
      {"experiment", S::kEvaluation},
      {"experiments", S::kEvaluation},
      {"experimental setup", S::kEvaluation},
      {"experimental settings", S::kEvaluation},
      {"experimental evaluation", S::kEvaluation},
      {"empirical evaluation", S::kEvaluation},
      {"evaluation setup", S::kEvaluation},
      {"experiments and results", S::kEvaluation},
      {"results", S::kResults},
      {"result", S::kResults},
      {"experimental results", S::kResults},
      {"results and analysis", S::kResults},
      {"results and discussion", S::kResults},
      {"findings", S::kResults},
      {"performance", S::kResults},
      {"discussion", S::kDiscussion},
      {"discussions", S::kDiscussion},
      {"analysis", S::kDiscussion},
      {"error analysis", S::kDiscussion},
      {"discussion and analysis", S::kDiscussion},
      {"ablation study", S::kDiscussion},
      {"limitations", S::kDiscussion},
      {"conclusion", S::kConclusion},
      {"conclusions", S::kConclusion},
      {"concluding remarks", S::kConclusion},
      {"conclusion and future work", S::kConclusion},
      {"conclusions and future work", S::kConclusion},
      {"summary", S::kConclusion},
      {"summary and conclusions", S::kConclusion},
      {"future work", S::kConclusion},
  };
  return kAliases;
}

bool is_enumeration_token(const std::string& token) {
  if (token.empty()) return false;
  std::string body = token;
  bool had_punct = false;
  while (!body.empty() && (body.back() == '.' || body.back() == ')' || body.back() == ':')) {
    body.pop_back();
    had_punct = true;
  }
  if (body.empty()) return true;
  // "3" or "3.1"
  bool numeric = true;
  for (char c : body) {
    if (!(c >= '0' && c <= '9') && c != '.') numeric = false;
  }
  if (numeric) return true;
  // roman numeral or single letter, only when followed by punctuation ("IV.", "a)")
  if (!had_punct) return false;
  if (body.size() == 1) return true;
  for (char c : body) {
    if (c != 'i' && c != 'v' && c != 'x' && c != 'l' && c != 'c' && c != 'd' && c != 'm') return false;
  }
  return true;
}

}  // namespace

std::optional<CanonicalSection> normalize_section_name(const std::string& raw) {
  std::string folded = to_lower(normalize_whitespace(raw));
  if (folded.empty()) return std::nullopt;

  std::vector<std::string> tokens = split_ws(folded);
  std::size_t start = 0;
  while (start < tokens.size() && is_enumeration_token(tokens[start])) ++start;
  std::string heading;
  for (std::size_t i = start; i < tokens.size(); ++i) {
    if (!heading.empty()) heading.push_back(' ');
    heading += tokens[i];
  }
  // strip trailing punctuation from the whole heading
  while (!heading.empty() && (heading.back() == '.' || heading.back() == ':')) heading.pop_back();

  const auto& aliases = section_alias_table();
  auto it = aliases.find(heading);
  if (it == aliases.end()) return std::nullopt;
  return it->second;
}

LabelSectionMap default_section_map(const LabelSchema& schema) {
  using S = CanonicalSection;
  static const std::map<std::string, std::set<CanonicalSection>> kTable = {
      {"background", {S::kIntroduction, S::kRelatedWork, S::kMotivation}},
      {"method", {S::kMethodology}},
      {"result", {S::kResults}},
      {"motivation", {S::kIntroduction}},
      {"uses", {S::kMotivation, S::kEvaluation, S::kMethodology, S::kResults}},
      {"compare_contrast", {S::kRelatedWork, S::kResults, S::kDiscussion}},
      {"extends", {S::kMotivation, S::kMethodology}},
      {"future", {S::kConclusion, S::kDiscussion}},
  };

  LabelSectionMap map;
  for (const Label& label : schema.labels()) {
    auto it = kTable.find(label.name);
    if (it == kTable.end()) {
      throw UsageError("no default section mapping for label '" + label.name +
                       "'; supply a custom section map");
    }
    map[label] = it->second;
  }
  validate_section_map(map, schema);
  return map;
}

LabelSectionMap load_section_map(const std::string& path, const LabelSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open section map: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed section map " + path + ": " + e.what());
  }
  LabelSectionMap map;
  // Entries for labels outside the schema are skipped, so one file can cover
  // several schemas; coverage is still enforced below.
  for (const auto& [key, value] : doc.items()) {
    Label label{key};
    if (!schema.contains(label)) continue;
    std::set<CanonicalSection> sections;
    for (const auto& name : value) {
      auto section = section_from_name(name.get<std::string>());
      if (!section) throw DataError("section map: unknown section '" + name.get<std::string>() + "'");
      sections.insert(*section);
    }
    map[label] = std::move(sections);
  }
  validate_section_map(map, schema);
  return map;
}

void validate_section_map(const LabelSectionMap& map, const LabelSchema& schema) {
  for (const Label& label : schema.labels()) {
    auto it = map.find(label);
    if (it == map.end() || it->second.empty()) {
      throw DataError("section map has no sections for label '" + label.name + "'");
    }
  }
}

}  // namespace citeintent

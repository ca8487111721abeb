#include "citeintent/labels.hpp"

#include <stdexcept>

#include "citeintent/errors.hpp"
#include "citeintent/hash.hpp"
#include "citeintent/text.hpp"

namespace citeintent {

LabelSchema::LabelSchema(std::string name, std::vector<Label> labels)
    : name_(std::move(name)), labels_(std::move(labels)) {
  if (labels_.empty()) throw UsageError("label schema '" + name_ + "' has no labels");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].name.empty()) throw UsageError("label schema '" + name_ + "' has an empty label");
    if (!index_.emplace(labels_[i].name, i).second) {
      throw UsageError("label schema '" + name_ + "' has duplicate label '" + labels_[i].name + "'");
    }
  }
}

std::optional<std::size_t> LabelSchema::index_of(const Label& label) const {
  auto it = index_.find(label.name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t LabelSchema::hash() const {
  std::uint64_t h = fnv1a(name_);
  for (const Label& l : labels_) {
    h = fnv1a("|", h);
    h = fnv1a(l.name, h);
  }
  return h;
}

const LabelSchema& acl_arc_schema() {
  static const LabelSchema schema(
      "acl-arc", {{"background"}, {"motivation"}, {"extends"}, {"uses"}, {"compare_contrast"}, {"future"}});
  return schema;
}

const LabelSchema& scicite_schema() {
  static const LabelSchema schema("scicite", {{"background"}, {"method"}, {"result"}});
  return schema;
}

bool is_builtin_schema(const std::string& name) {
  std::string n = to_lower(name);
  return n == "acl-arc" || n == "aclarc" || n == "acl_arc" || n == "scicite";
}

const LabelSchema& builtin_schema(const std::string& name) {
  std::string n = to_lower(name);
  if (n == "acl-arc" || n == "aclarc" || n == "acl_arc") return acl_arc_schema();
  if (n == "scicite") return scicite_schema();
  throw UsageError("unknown schema '" + name + "' (built-ins: acl-arc, scicite)");
}

const std::unordered_map<std::string, std::string>& label_alias_table() {
  // Source-release spellings mapped to canonical lowercase tokens.
  static const std::unordered_map<std::string, std::string> kAliases = {
      // acl-arc release spellings
      {"compareorcontrast", "compare_contrast"},
      {"compares/contrasts", "compare_contrast"},
      {"comparison", "compare_contrast"},
      {"extend", "extends"},
      {"futurework", "future"},
      {"future_work", "future"},
      // scicite release spellings
      {"methodology", "method"},
      {"resultcomparison", "result"},
      {"result_comparison", "result"},
      {"results", "result"},
  };
  return kAliases;
}

std::optional<Label> canonicalize_label(const LabelSchema& schema, const std::string& raw) {
  std::string folded = to_lower(normalize_whitespace(raw));
  Label direct{folded};
  if (schema.contains(direct)) return direct;
  const auto& aliases = label_alias_table();
  auto it = aliases.find(folded);
  if (it != aliases.end()) {
    Label aliased{it->second};
    if (schema.contains(aliased)) return aliased;
  }
  return std::nullopt;
}

}  // namespace citeintent

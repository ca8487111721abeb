#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace citeintent {

struct Label {
  std::string name;  // canonical lowercase identifier

  bool operator==(const Label& other) const { return name == other.name; }
  bool operator!=(const Label& other) const { return name != other.name; }
  bool operator<(const Label& other) const { return name < other.name; }
};

// Ordered, distinct label set. Label order is load-bearing: it defines
// confusion-matrix indexing and prediction tie-breaking.
class LabelSchema {
 public:
  LabelSchema() = default;
  LabelSchema(std::string name, std::vector<Label> labels);

  const std::string& name() const { return name_; }
  const std::vector<Label>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }

  std::optional<std::size_t> index_of(const Label& label) const;
  bool contains(const Label& label) const { return index_of(label).has_value(); }

  // Stable fingerprint over name and ordered labels.
  std::uint64_t hash() const;

  bool operator==(const LabelSchema& other) const {
    return name_ == other.name_ && labels_ == other.labels_;
  }

 private:
  std::string name_;
  std::vector<Label> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Built-in schemas. acl_arc: 6 intents; scicite: 3 coarse intents.
const LabelSchema& acl_arc_schema();
const LabelSchema& scicite_schema();

// Looks up a built-in schema by name ("acl-arc" or "scicite").
const LabelSchema& builtin_schema(const std::string& name);
bool is_builtin_schema(const std::string& name);

// Maps a source-dataset label spelling to the canonical label of the schema.
// Falls back to case-folded canonical names, then the shipped alias table.
std::optional<Label> canonicalize_label(const LabelSchema& schema, const std::string& raw);

// The shipped alias table as a JSON-serializable map, for resource export.
const std::unordered_map<std::string, std::string>& label_alias_table();

}  // namespace citeintent

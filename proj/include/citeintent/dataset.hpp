#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "citeintent/labels.hpp"

namespace citeintent {

enum class Split { kTrain, kDev, kTest };

std::string split_name(Split split);
Split parse_split(const std::string& name);

// One citation sentence, optionally labeled.
struct CitationInstance {
  std::string text;                        // whitespace-normalized on load
  std::optional<Label> label;              // absent for unlabeled inference
  std::string instance_id;
  std::optional<std::string> section_hint; // raw section name, if the record had one
};

// Immutable after construction; safe to share across threads.
class Dataset {
 public:
  Dataset() = default;
  Dataset(LabelSchema schema, Split split, std::vector<CitationInstance> instances);

  const LabelSchema& schema() const { return schema_; }
  Split split() const { return split_; }
  const std::vector<CitationInstance>& instances() const { return instances_; }
  std::size_t size() const { return instances_.size(); }

  // Number of instances carrying the given label.
  std::size_t count_label(const Label& label) const;

 private:
  LabelSchema schema_;
  Split split_ = Split::kTrain;
  std::vector<CitationInstance> instances_;
};

// Reads a UTF-8 line-delimited JSON file. Required keys: "string", "label"
// (records without "label" are only accepted when allow_unlabeled is set).
// Optional keys: "id", "sectionName". Unknown keys are ignored.
Dataset load_dataset(const std::string& path, const LabelSchema& schema, Split split,
                     bool allow_unlabeled = false);

// Writes the dataset back in the same line-delimited JSON format.
void save_dataset(const Dataset& dataset, const std::string& path);

// Stratified k-shot subset of a train split: min(k, available) instances per
// label, drawn uniformly without replacement, deterministic in (dataset, k,
// seed). Selected instances keep their original dataset order.
Dataset sample_few_shot(const Dataset& dataset, int k, std::uint64_t seed);

}  // namespace citeintent

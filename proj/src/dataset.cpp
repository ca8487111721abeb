#include "citeintent/dataset.hpp"

#include <fstream>
#include <unordered_set>

#include "json.hpp"

#include "citeintent/errors.hpp"
#include "citeintent/rng.hpp"
#include "citeintent/text.hpp"

namespace citeintent {

using nlohmann::json;

std::string split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

Split parse_split(const std::string& name) {
  std::string n = to_lower(name);
  if (n == "train") return Split::kTrain;
  if (n == "dev" || n == "validation" || n == "val") return Split::kDev;
  if (n == "test") return Split::kTest;
  throw UsageError("unknown split '" + name + "' (expected train, dev or test)");
}

Dataset::Dataset(LabelSchema schema, Split split, std::vector<CitationInstance> instances)
    : schema_(std::move(schema)), split_(split), instances_(std::move(instances)) {
  std::unordered_set<std::string> seen;
  for (const CitationInstance& inst : instances_) {
    if (inst.text.empty()) {
      throw DataError("instance '" + inst.instance_id + "' has empty text");
    }
    if (inst.label && !schema_.contains(*inst.label)) {
      throw DataError("instance '" + inst.instance_id + "' has label '" + inst.label->name +
                      "' outside schema '" + schema_.name() + "'");
    }
    if (!seen.insert(inst.instance_id).second) {
      throw DataError("duplicate instance id '" + inst.instance_id + "' in " + split_name(split_) +
                      " split");
    }
  }
}

std::size_t Dataset::count_label(const Label& label) const {
  std::size_t n = 0;
  for (const CitationInstance& inst : instances_) {
    if (inst.label && *inst.label == label) ++n;
  }
  return n;
}

Dataset load_dataset(const std::string& path, const LabelSchema& schema, Split split,
                     bool allow_unlabeled) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path);

  std::vector<CitationInstance> instances;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (normalize_whitespace(line).empty()) continue;

    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": malformed record: " + e.what());
    }
    if (!record.is_object()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": record is not a JSON object");
    }
    if (!record.contains("string") || !record["string"].is_string()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": missing required field \"string\"");
    }

    CitationInstance inst;
    inst.text = normalize_whitespace(record["string"].get<std::string>());
    if (inst.text.empty()) {
      throw DataError(path + ":" + std::to_string(line_no) + ": empty citation text");
    }

    if (record.contains("label") && !record["label"].is_null()) {
      if (!record["label"].is_string()) {
        throw DataError(path + ":" + std::to_string(line_no) + ": field \"label\" is not a string");
      }
      std::string raw = record["label"].get<std::string>();
      auto label = canonicalize_label(schema, raw);
      if (!label) {
        throw DataError(path + ":" + std::to_string(line_no) + ": unknown label '" + raw +
                        "' for schema '" + schema.name() + "'");
      }
      inst.label = *label;
    } else if (!allow_unlabeled) {
      throw DataError(path + ":" + std::to_string(line_no) + ": missing required field \"label\"");
    }

    if (record.contains("id") && !record["id"].is_null()) {
      if (record["id"].is_string()) {
        inst.instance_id = record["id"].get<std::string>();
      } else if (record["id"].is_number_integer()) {
        inst.instance_id = std::to_string(record["id"].get<std::int64_t>());
      } else {
        throw DataError(path + ":" + std::to_string(line_no) + ": field \"id\" is not a string");
      }
    } else {
      inst.instance_id = "line-" + std::to_string(line_no);
    }

    if (record.contains("sectionName") && record["sectionName"].is_string()) {
      inst.section_hint = record["sectionName"].get<std::string>();
    }

    instances.push_back(std::move(inst));
  }
  return Dataset(schema, split, std::move(instances));
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset file: " + path);
  for (const CitationInstance& inst : dataset.instances()) {
    json record;
    record["string"] = inst.text;
    if (inst.label) record["label"] = inst.label->name;
    record["id"] = inst.instance_id;
    if (inst.section_hint) record["sectionName"] = *inst.section_hint;
    out << record.dump() << "\n";
  }
  if (!out) throw DataError("write failed: " + path);
}

Dataset sample_few_shot(const Dataset& dataset, int k, std::uint64_t seed) {
  if (k <= 0) throw UsageError("few-shot k must be positive, got " + std::to_string(k));
  if (dataset.split() != Split::kTrain) {
    throw UsageError("few-shot sampling draws from the train split only");
  }

  const auto& instances = dataset.instances();
  std::vector<bool> selected(instances.size(), false);

  Rng rng(seed);
  // Labels processed in schema order so draws are reproducible.
  for (const Label& label : dataset.schema().labels()) {
    std::vector<std::size_t> positions;
    for (std::size_t i = 0; i < instances.size(); ++i) {
      if (instances[i].label && *instances[i].label == label) positions.push_back(i);
    }
    if (positions.empty()) {
      throw DataError("train split has no instances for label '" + label.name + "'");
    }
    for (std::size_t chosen : rng.sample_indices(positions.size(), static_cast<std::size_t>(k))) {
      selected[positions[chosen]] = true;
    }
  }

  std::vector<CitationInstance> subset;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (selected[i]) subset.push_back(instances[i]);
  }
  return Dataset(dataset.schema(), dataset.split(), std::move(subset));
}

}  // namespace citeintent

#include "citeintent/verbalizer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "citeintent/errors.hpp"
#include "citeintent/hash.hpp"
#include "citeintent/version.hpp"

namespace citeintent {

namespace {

using json = nlohmann::ordered_json;

// One table covers both built-in schemas; the method anchors are fixed, the
// rest are shipped defaults (kAnchorTableVersion).
const std::map<std::string, std::vector<std::string>>& anchor_table() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"background", {"background", "prior", "context"}},
      {"method", {"technique", "procedure", "method"}},
      {"result", {"result", "comparison", "outcome"}},
      {"motivation", {"motivation", "need", "inspiration"}},
      {"extends", {"extension", "improvement"}},
      {"uses", {"use", "usage", "application"}},
      {"compare_contrast", {"comparison", "contrast", "difference"}},
      {"future", {"future", "prospect"}},
  };
  return table;
}

bool is_lower_single_word(const std::string& word) {
  if (word.empty()) return false;
  for (unsigned char c : word) {
    if (!(std::islower(c) || c == '_' || c == '-')) return false;
  }
  return true;
}

std::vector<LabelWordEntry> uniform_entries(std::vector<LabelWordEntry> entries) {
  if (entries.empty()) return entries;
  double w = 1.0 / static_cast<double>(entries.size());
  for (auto& e : entries) e.weight = w;
  return entries;
}

}  // namespace

AnchorSet default_anchors(const LabelSchema& schema) {
  AnchorSet out;
  for (const Label& label : schema.labels()) {
    auto it = anchor_table().find(label.name);
    if (it == anchor_table().end()) {
      throw UsageError("no shipped anchors for label '" + label.name +
                       "'; supply a custom anchor file");
    }
    out[label] = it->second;
  }
  return out;
}

AnchorSet load_anchor_set(const std::string& path, const LabelSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open anchor file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed anchor file " + path + ": " + e.what());
  }
  AnchorSet anchors;
  try {
    // Entries for labels outside the schema are skipped, so one file can
    // cover several schemas; coverage is still enforced below.
    for (const auto& [key, value] : doc.items()) {
      Label label{key};
      if (!schema.contains(label)) continue;
      anchors[label] = value.get<std::vector<std::string>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed anchor file " + path + ": " + e.what());
  }
  validate_anchor_set(anchors, schema);
  return anchors;
}

void validate_anchor_set(const AnchorSet& anchors, const LabelSchema& schema) {
  for (const Label& label : schema.labels()) {
    auto it = anchors.find(label);
    if (it == anchors.end() || it->second.empty()) {
      throw UsageError("anchor set is missing label '" + label.name + "'");
    }
    for (const std::string& word : it->second) {
      if (!is_lower_single_word(word)) {
        throw UsageError("anchor '" + word + "' for label '" + label.name +
                         "' is not a lowercase single word");
      }
    }
  }
}

Verbalizer::Verbalizer(LabelSchema schema, std::map<Label, std::vector<LabelWordEntry>> entries,
                       VerbalizerManifest manifest)
    : schema_(std::move(schema)), entries_(std::move(entries)), manifest_(std::move(manifest)) {
  validate();
}

const std::vector<LabelWordEntry>& Verbalizer::entries(const Label& label) const {
  auto it = entries_.find(label);
  if (it == entries_.end()) {
    throw UsageError("verbalizer has no entries for label '" + label.name + "'");
  }
  return it->second;
}

std::vector<std::string> Verbalizer::words(const Label& label) const {
  std::vector<std::string> out;
  for (const auto& e : entries(label)) out.push_back(e.word);
  return out;
}

std::vector<std::string> Verbalizer::all_words() const {
  std::set<std::string> seen;
  for (const auto& [label, entries] : entries_) {
    for (const auto& e : entries) seen.insert(e.word);
  }
  return {seen.begin(), seen.end()};
}

void Verbalizer::set_entries(const Label& label, std::vector<LabelWordEntry> entries) {
  if (!schema_.contains(label)) {
    throw UsageError("label '" + label.name + "' is not in the verbalizer schema");
  }
  entries_[label] = std::move(entries);
}

void Verbalizer::set_weights(const Label& label, const std::vector<double>& weights) {
  auto it = entries_.find(label);
  if (it == entries_.end()) {
    throw UsageError("verbalizer has no entries for label '" + label.name + "'");
  }
  if (weights.size() != it->second.size()) {
    throw UsageError("weight count does not match word count for label '" + label.name + "'");
  }
  for (std::size_t i = 0; i < weights.size(); ++i) it->second[i].weight = weights[i];
}

void Verbalizer::normalize_weights() {
  for (auto& [label, entries] : entries_) {
    double sum = 0.0;
    for (const auto& e : entries) {
      if (!std::isfinite(e.weight) || e.weight < 0.0) {
        throw ModelError("label '" + label.name + "' has a negative or non-finite weight");
      }
      sum += e.weight;
    }
    if (sum <= 0.0) {
      throw ModelError("label '" + label.name + "' has zero total weight");
    }
    for (auto& e : entries) e.weight /= sum;
  }
}

void Verbalizer::validate() const {
  if (schema_.size() == 0) throw ModelError("verbalizer schema is empty");
  for (const Label& label : schema_.labels()) {
    auto it = entries_.find(label);
    if (it == entries_.end() || it->second.empty()) {
      throw ModelError("verbalizer label '" + label.name + "' has no words");
    }
    std::unordered_set<std::string> seen;
    double sum = 0.0;
    for (const auto& e : it->second) {
      if (e.word.empty()) throw ModelError("verbalizer contains an empty word");
      if (!seen.insert(e.word).second) {
        throw ModelError("word '" + e.word + "' duplicated under label '" + label.name + "'");
      }
      if (!std::isfinite(e.weight) || e.weight < 0.0) {
        throw ModelError("word '" + e.word + "' has a negative or non-finite weight");
      }
      sum += e.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ModelError("weights for label '" + label.name + "' do not sum to one");
    }
  }
  for (const auto& [label, entries] : entries_) {
    if (!schema_.contains(label)) {
      throw ModelError("verbalizer entry label '" + label.name + "' is outside the schema");
    }
  }
}

std::uint64_t Verbalizer::content_hash() const {
  std::uint64_t h = fnv1a_u64(schema_.hash());
  for (const Label& label : schema_.labels()) {
    h = fnv1a(label.name, h);
    for (const auto& e : entries(label)) {
      h = fnv1a(e.word, h);
      h = fnv1a_double(e.weight, h);
      h = fnv1a(e.anchor, h);
      h = fnv1a(e.section ? section_name(*e.section) : "", h);
    }
  }
  h = fnv1a_u64(manifest_.expansion_k, h);
  h = fnv1a(manifest_.embedding_id, h);
  h = fnv1a(manifest_.corpus_hash, h);
  h = fnv1a(manifest_.anchor_version, h);
  for (const auto& step : manifest_.refinements) h = fnv1a(step, h);
  h = fnv1a_u64(manifest_.learnable_weights ? 1 : 0, h);
  return h;
}

Verbalizer build_verbalizer(const LabelSchema& schema, const AnchorSet& anchors,
                            const LabelSectionMap& section_map, const SectionCorpus& corpus,
                            const EmbeddingProvider& embedder, std::size_t k) {
  validate_anchor_set(anchors, schema);
  validate_section_map(section_map, schema);
  if (k == 0) throw UsageError("expansion k must be positive");

  std::map<Label, std::vector<LabelWordEntry>> entries;
  for (const Label& label : schema.labels()) {
    const auto& sections = section_map.at(label);
    for (CanonicalSection s : sections) {
      if (corpus.word_count(s) == 0) {
        throw DataError("corpus section '" + section_name(s) + "' mapped to label '" +
                        label.name + "' is empty");
      }
    }
    std::vector<LabelWordEntry> list;
    std::unordered_set<std::string> seen;
    for (const std::string& anchor : anchors.at(label)) {
      if (seen.insert(anchor).second) list.push_back({anchor, 0.0, anchor, std::nullopt});
    }
    for (const std::string& anchor : anchors.at(label)) {
      for (CanonicalSection s : sections) {
        for (const std::string& word :
             top_k_similar(embedder, anchor, corpus.unique_words(s), k)) {
          if (seen.insert(word).second) list.push_back({word, 0.0, anchor, s});
        }
      }
    }
    entries[label] = uniform_entries(std::move(list));
  }

  VerbalizerManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.expansion_k = k;
  manifest.embedding_id = embedder.id();
  manifest.corpus_hash = hash_hex(corpus.content_hash());
  manifest.anchor_version = kAnchorTableVersion;
  return {schema, std::move(entries), std::move(manifest)};
}

Verbalizer make_anchor_verbalizer(const LabelSchema& schema, const AnchorSet& anchors) {
  validate_anchor_set(anchors, schema);
  std::map<Label, std::vector<LabelWordEntry>> entries;
  for (const Label& label : schema.labels()) {
    std::vector<LabelWordEntry> list;
    std::unordered_set<std::string> seen;
    for (const std::string& anchor : anchors.at(label)) {
      if (seen.insert(anchor).second) list.push_back({anchor, 0.0, anchor, std::nullopt});
    }
    entries[label] = uniform_entries(std::move(list));
  }
  VerbalizerManifest manifest;
  manifest.tool_version = kToolVersion;
  manifest.embedding_id = "none";
  manifest.corpus_hash = "none";
  manifest.anchor_version = kAnchorTableVersion;
  return {schema, std::move(entries), std::move(manifest)};
}

std::map<Label, double> score_labels(const MaskDistribution& dist, const Verbalizer& verbalizer,
                                     ResolutionLog* log) {
  verbalizer.validate();
  if (!dist.vocab) throw ModelError("mask distribution has no vocabulary");
  std::map<Label, double> scores;
  for (const Label& label : verbalizer.schema().labels()) {
    double score = 0.0;
    for (const auto& entry : verbalizer.entries(label)) {
      auto resolved = dist.vocab->resolve(entry.word);
      if (!resolved) {
        if (log) log->unresolved.push_back(entry.word);
        continue;
      }
      if (resolved->multi_piece && log) log->multi_piece.push_back(entry.word);
      score += entry.weight * dist.probs.at(resolved->id);
    }
    scores[label] = score;
  }
  return scores;
}

Label predict(const MaskDistribution& dist, const Verbalizer& verbalizer, ResolutionLog* log) {
  auto scores = score_labels(dist, verbalizer, log);
  const auto& labels = verbalizer.schema().labels();
  Label best = labels.front();
  double best_score = scores.at(best);
  for (const Label& label : labels) {
    if (scores.at(label) > best_score) {
      best = label;
      best_score = scores.at(label);
    }
  }
  return best;
}

void save_verbalizer(const Verbalizer& verbalizer, const std::string& path) {
  verbalizer.validate();
  json doc;
  doc["version"] = kVerbalizerFileVersion;
  json schema = json::array();
  for (const Label& label : verbalizer.schema().labels()) schema.push_back(label.name);
  doc["schema"] = schema;

  const auto& m = verbalizer.manifest();
  json manifest;
  manifest["tool_version"] = m.tool_version;
  manifest["schema_name"] = verbalizer.schema().name();
  manifest["schema_hash"] = hash_hex(verbalizer.schema().hash());
  manifest["expansion_k"] = m.expansion_k;
  manifest["embedding_id"] = m.embedding_id;
  manifest["corpus_hash"] = m.corpus_hash;
  manifest["anchor_version"] = m.anchor_version;
  manifest["refinements"] = m.refinements;
  manifest["pipeline_fingerprint"] = m.pipeline_fingerprint;
  manifest["learnable_weights"] = m.learnable_weights;
  json sizes;
  for (const Label& label : verbalizer.schema().labels()) {
    sizes[label.name] = verbalizer.entries(label).size();
  }
  manifest["label_sizes"] = sizes;
  doc["manifest"] = manifest;

  json labels;
  for (const Label& label : verbalizer.schema().labels()) {
    json list = json::array();
    for (const auto& e : verbalizer.entries(label)) {
      json entry;
      entry["word"] = e.word;
      entry["weight"] = e.weight;
      entry["anchor"] = e.anchor;
      entry["section"] = e.section ? json(section_name(*e.section)) : json(nullptr);
      list.push_back(entry);
    }
    labels[label.name] = list;
  }
  doc["labels"] = labels;

  std::ofstream out(path);
  if (!out) throw DataError("cannot write verbalizer file: " + path);
  out << doc.dump(2) << "\n";
}

Verbalizer load_verbalizer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open verbalizer file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("verbalizer file " + path + " is not valid JSON: " + e.what());
  }
  try {
    if (doc.at("version").get<int>() != kVerbalizerFileVersion) {
      throw DataError("verbalizer file " + path + " has an unsupported version");
    }
    std::vector<Label> labels;
    for (const auto& name : doc.at("schema")) labels.push_back({name.get<std::string>()});
    const json& m = doc.at("manifest");
    LabelSchema schema(m.value("schema_name", ""), labels);
    if (m.at("schema_hash").get<std::string>() != hash_hex(schema.hash())) {
      throw DataError("verbalizer file " + path + " fails its schema hash check");
    }

    VerbalizerManifest manifest;
    manifest.tool_version = m.at("tool_version").get<std::string>();
    manifest.expansion_k = m.at("expansion_k").get<std::size_t>();
    manifest.embedding_id = m.at("embedding_id").get<std::string>();
    manifest.corpus_hash = m.at("corpus_hash").get<std::string>();
    manifest.anchor_version = m.at("anchor_version").get<std::string>();
    manifest.refinements = m.at("refinements").get<std::vector<std::string>>();
    manifest.pipeline_fingerprint = m.at("pipeline_fingerprint").get<std::string>();
    manifest.learnable_weights = m.at("learnable_weights").get<bool>();

    std::map<Label, std::vector<LabelWordEntry>> entries;
    for (const Label& label : schema.labels()) {
      std::vector<LabelWordEntry> list;
      for (const auto& item : doc.at("labels").at(label.name)) {
        LabelWordEntry e;
        e.word = item.at("word").get<std::string>();
        e.weight = item.at("weight").get<double>();
        e.anchor = item.at("anchor").get<std::string>();
        if (!item.at("section").is_null()) {
          auto section = section_from_name(item.at("section").get<std::string>());
          if (!section) {
            throw DataError("verbalizer file " + path + " names unknown section '" +
                            item.at("section").get<std::string>() + "'");
          }
          e.section = *section;
        }
        list.push_back(std::move(e));
      }
      entries[label] = std::move(list);
    }
    return {std::move(schema), std::move(entries), std::move(manifest)};
  } catch (const json::exception& e) {
    throw DataError("verbalizer file " + path + " is malformed: " + e.what());
  }
}

}  // namespace citeintent

#include "citeintent/corpus.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <unordered_set>

#include "json.hpp"

#include "citeintent/errors.hpp"
#include "citeintent/hash.hpp"
#include "citeintent/text.hpp"
#include "citeintent/version.hpp"

namespace citeintent {

namespace fs = std::filesystem;
using nlohmann::json;

SectionCorpus::SectionCorpus(std::size_t quota,
                             std::array<std::vector<std::string>, kNumSections> words,
                             std::size_t papers_consumed, std::size_t records_skipped)
    : quota_(quota),
      words_(std::move(words)),
      papers_consumed_(papers_consumed),
      records_skipped_(records_skipped) {
  for (const auto& section_words : words_) {
    if (section_words.size() > quota_) {
      throw DataError("section corpus exceeds its quota");
    }
  }
}

const std::vector<std::string>& SectionCorpus::words(CanonicalSection section) const {
  return words_[static_cast<std::size_t>(section)];
}

std::size_t SectionCorpus::word_count(CanonicalSection section) const {
  return words(section).size();
}

std::vector<std::string> SectionCorpus::unique_words(CanonicalSection section) const {
  std::vector<std::string> out;
  std::unordered_set<std::string_view> seen;
  for (const std::string& w : words(section)) {
    if (seen.insert(w).second) out.push_back(w);
  }
  return out;
}

bool SectionCorpus::all_sections_full() const {
  for (CanonicalSection s : all_sections()) {
    if (word_count(s) < quota_) return false;
  }
  return true;
}

std::uint64_t SectionCorpus::content_hash() const {
  std::uint64_t h = fnv1a_u64(quota_);
  for (CanonicalSection s : all_sections()) {
    h = fnv1a(section_name(s), h);
    for (const std::string& w : words(s)) {
      h = fnv1a(w, h);
      h = fnv1a(" ", h);
    }
  }
  return h;
}

SectionCorpus ingest_sections(const PaperStream& stream, const IngestOptions& options) {
  if (options.quota == 0) throw UsageError("corpus quota must be positive");

  std::array<std::vector<std::string>, kNumSections> words;
  for (auto& v : words) v.reserve(std::min<std::size_t>(options.quota, 1u << 20));

  std::optional<std::string> fos_filter;
  if (options.field_of_study) fos_filter = to_lower(*options.field_of_study);

  std::size_t papers = 0;
  std::size_t skipped = 0;

  auto full = [&] {
    for (const auto& v : words) {
      if (v.size() < options.quota) return false;
    }
    return true;
  };

  while (!full()) {
    std::optional<ParsedPaper> paper;
    try {
      paper = stream();
    } catch (const DataError&) {
      ++skipped;
      continue;
    }
    if (!paper) break;

    if (fos_filter && paper->field_of_study &&
        to_lower(*paper->field_of_study) != *fos_filter) {
      continue;
    }

    bool contributed = false;
    for (const auto& [heading, body] : paper->sections) {
      auto section = normalize_section_name(heading);
      if (!section) continue;
      auto& bucket = words[static_cast<std::size_t>(*section)];
      if (bucket.size() >= options.quota) continue;
      for (std::string& token : alpha_tokens(body)) {
        if (bucket.size() >= options.quota) break;
        bucket.push_back(std::move(token));
        contributed = true;
      }
    }
    if (contributed) ++papers;
  }

  return SectionCorpus(options.quota, std::move(words), papers, skipped);
}

PaperStream jsonl_paper_stream(const std::string& path) {
  auto in = std::make_shared<std::ifstream>(path);
  if (!*in) throw DataError("cannot open parsed-paper stream: " + path);
  auto line_no = std::make_shared<std::size_t>(0);

  return [in, line_no, path]() -> std::optional<ParsedPaper> {
    std::string line;
    while (std::getline(*in, line)) {
      ++*line_no;
      if (normalize_whitespace(line).empty()) continue;
      json record;
      try {
        record = json::parse(line);
      } catch (const json::exception& e) {
        throw DataError(path + ":" + std::to_string(*line_no) + ": malformed paper record: " +
                        e.what());
      }
      ParsedPaper paper;
      if (record.contains("paper_id")) {
        if (record["paper_id"].is_string()) {
          paper.paper_id = record["paper_id"].get<std::string>();
        } else if (record["paper_id"].is_number_integer()) {
          paper.paper_id = std::to_string(record["paper_id"].get<std::int64_t>());
        }
      }
      if (paper.paper_id.empty()) paper.paper_id = "paper-" + std::to_string(*line_no);
      if (record.contains("field_of_study") && record["field_of_study"].is_string()) {
        paper.field_of_study = record["field_of_study"].get<std::string>();
      }
      if (!record.contains("body_text") || !record["body_text"].is_array()) {
        throw DataError(path + ":" + std::to_string(*line_no) + ": missing \"body_text\" array");
      }
      for (const auto& entry : record["body_text"]) {
        if (!entry.is_object() || !entry.contains("section") || !entry.contains("text")) continue;
        if (!entry["section"].is_string() || !entry["text"].is_string()) continue;
        paper.sections.emplace_back(entry["section"].get<std::string>(),
                                    entry["text"].get<std::string>());
      }
      return paper;
    }
    return std::nullopt;
  };
}

void save_corpus(const SectionCorpus& corpus, const std::string& dir) {
  fs::create_directories(dir);
  json sections = json::object();
  for (CanonicalSection s : all_sections()) {
    const std::string name = section_name(s);
    std::ofstream out(fs::path(dir) / (name + ".txt"));
    if (!out) throw DataError("cannot write corpus file for section " + name);
    std::unordered_set<std::string_view> uniq;
    for (const std::string& w : corpus.words(s)) {
      out << w << "\n";
      uniq.insert(w);
    }
    sections[name] = {{"word_count", corpus.word_count(s)}, {"unique_words", uniq.size()}};
  }

  json manifest = {
      {"version", kCorpusManifestVersion},
      {"tool_version", kToolVersion},
      {"quota", corpus.quota()},
      {"papers_consumed", corpus.papers_consumed()},
      {"records_skipped", corpus.records_skipped()},
      {"sections", sections},
      {"tokenizer",
       {{"kind", "alpha-lower"},
        {"min_token_len", kCorpusTokenMinLen},
        {"stopword_list", kStopwordListVersion},
        {"counting", "running tokens after filtering"}}},
      {"content_hash", hash_hex(corpus.content_hash())},
  };
  std::ofstream mout(fs::path(dir) / "manifest.json");
  if (!mout) throw DataError("cannot write corpus manifest in " + dir);
  mout << manifest.dump(2) << "\n";
}

SectionCorpus load_corpus(const std::string& dir) {
  std::ifstream min(fs::path(dir) / "manifest.json");
  if (!min) throw DataError("missing corpus manifest: " + dir + "/manifest.json");
  json manifest;
  try {
    min >> manifest;
  } catch (const json::exception& e) {
    throw DataError("malformed corpus manifest in " + dir + ": " + e.what());
  }
  if (manifest.value("version", 0) != kCorpusManifestVersion) {
    throw DataError("unsupported corpus manifest version in " + dir);
  }
  std::size_t quota = manifest.at("quota").get<std::size_t>();

  std::array<std::vector<std::string>, kNumSections> words;
  for (CanonicalSection s : all_sections()) {
    const std::string name = section_name(s);
    std::ifstream in(fs::path(dir) / (name + ".txt"));
    if (!in) throw DataError("missing corpus file: " + dir + "/" + name + ".txt");
    std::string line;
    auto& bucket = words[static_cast<std::size_t>(s)];
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) bucket.push_back(line);
    }
  }
  return SectionCorpus(quota, std::move(words), manifest.value("papers_consumed", std::size_t{0}),
                       manifest.value("records_skipped", std::size_t{0}));
}

}  // namespace citeintent

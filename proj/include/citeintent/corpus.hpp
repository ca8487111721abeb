#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "citeintent/sections.hpp"

namespace citeintent {

// Per-section word corpora mined from parsed papers; the external knowledge
// base for verbalizer construction. Immutable after build.
class SectionCorpus {
 public:
  SectionCorpus() = default;
  SectionCorpus(std::size_t quota, std::array<std::vector<std::string>, kNumSections> words,
                std::size_t papers_consumed, std::size_t records_skipped);

  std::size_t quota() const { return quota_; }
  std::size_t papers_consumed() const { return papers_consumed_; }
  std::size_t records_skipped() const { return records_skipped_; }

  // Running tokens in ingestion order, length <= quota.
  const std::vector<std::string>& words(CanonicalSection section) const;
  std::size_t word_count(CanonicalSection section) const;

  // Deduplicated words of a section (first-seen order), the candidate set
  // for anchor expansion.
  std::vector<std::string> unique_words(CanonicalSection section) const;

  bool all_sections_full() const;

  // Content fingerprint, recorded in verbalizer manifests.
  std::uint64_t content_hash() const;

 private:
  std::size_t quota_ = 0;
  std::array<std::vector<std::string>, kNumSections> words_{};
  std::size_t papers_consumed_ = 0;
  std::size_t records_skipped_ = 0;
};

// One parsed paper: heading/body pairs plus optional metadata.
struct ParsedPaper {
  std::string paper_id;
  std::optional<std::string> field_of_study;
  std::vector<std::pair<std::string, std::string>> sections;  // (heading, body text)
};

// Pull-based paper stream; returns nullopt at end. Implementations may throw
// DataError for unreadable records, which ingest_sections counts and skips.
using PaperStream = std::function<std::optional<ParsedPaper>()>;

struct IngestOptions {
  std::size_t quota = 100000;                     // words per section
  std::optional<std::string> field_of_study;      // keep only matching papers when the field is present
};

// Fills each canonical section with up to quota filtered tokens, in stream
// order, stopping early once every section is full.
SectionCorpus ingest_sections(const PaperStream& stream, const IngestOptions& options);

// Stream over a line-delimited JSON file of parsed-paper records:
// {"paper_id": ..., "field_of_study"?: ..., "body_text": [{"section": ..., "text": ...}]}
PaperStream jsonl_paper_stream(const std::string& path);

// Archive layout: one word-list file per section plus manifest.json.
void save_corpus(const SectionCorpus& corpus, const std::string& dir);
SectionCorpus load_corpus(const std::string& dir);

}  // namespace citeintent

#include <doctest.h>

#include <fstream>
#include <json.hpp>
#include <optional>

#include "citeintent/corpus.hpp"
#include "citeintent/errors.hpp"
#include "citeintent/sections.hpp"
#include "test_util.hpp"

using namespace citeintent;
using testutil::TempDir;

TEST_CASE("normalize_section_name strips enumeration and folds aliases") {
  using S = CanonicalSection;
  CHECK(normalize_section_name("1. Introduction") == S::kIntroduction);
  CHECK(normalize_section_name("IV. Experimental Setup") == S::kEvaluation);
  CHECK(normalize_section_name("7 Conclusion and Future Work") == S::kConclusion);
  CHECK(normalize_section_name("RELATED WORK") == S::kRelatedWork);
  CHECK(normalize_section_name("Methods.") == S::kMethodology);
  CHECK(normalize_section_name("a) Model") == S::kMethodology);
  CHECK(normalize_section_name("3.1 Results:") == S::kResults);
  CHECK(normalize_section_name("  background  ") == S::kIntroduction);
  CHECK(normalize_section_name("Error Analysis") == S::kDiscussion);
  CHECK_FALSE(normalize_section_name("Acknowledgments").has_value());
  CHECK_FALSE(normalize_section_name("").has_value());
  CHECK_FALSE(normalize_section_name("2.")
                  .has_value());  // enumeration with nothing behind it
}

TEST_CASE("section_name and section_from_name round trip") {
  for (CanonicalSection s : all_sections()) {
    auto back = section_from_name(section_name(s));
    REQUIRE(back.has_value());
    CHECK(*back == s);
  }
  CHECK_FALSE(section_from_name("appendix").has_value());
}

TEST_CASE("shipped section alias file agrees with the normalizer") {
  std::ifstream in(DATA_DIR "/section_aliases.json");
  REQUIRE(in);
  nlohmann::json doc = nlohmann::json::parse(in);
  REQUIRE(doc.size() == 8);  // one entry per canonical section
  for (const auto& [canonical, aliases] : doc.items()) {
    auto section = section_from_name(canonical);
    REQUIRE(section.has_value());
    for (const auto& alias : aliases) {
      auto resolved = normalize_section_name(alias.get<std::string>());
      REQUIRE(resolved.has_value());
      CHECK(*resolved == *section);
    }
  }
}

TEST_CASE("default section map pins the label-to-section table") {
  using S = CanonicalSection;
  auto sci = default_section_map(scicite_schema());
  CHECK(sci.at(Label{"background"}) ==
        std::set<S>{S::kIntroduction, S::kRelatedWork, S::kMotivation});
  CHECK(sci.at(Label{"method"}) == std::set<S>{S::kMethodology});
  CHECK(sci.at(Label{"result"}) == std::set<S>{S::kResults});

  auto acl = default_section_map(acl_arc_schema());
  CHECK(acl.at(Label{"motivation"}) == std::set<S>{S::kIntroduction});
  CHECK(acl.at(Label{"uses"}) ==
        std::set<S>{S::kMotivation, S::kEvaluation, S::kMethodology, S::kResults});
  CHECK(acl.at(Label{"compare_contrast"}) ==
        std::set<S>{S::kRelatedWork, S::kResults, S::kDiscussion});
  CHECK(acl.at(Label{"extends"}) == std::set<S>{S::kMotivation, S::kMethodology});
  CHECK(acl.at(Label{"future"}) == std::set<S>{S::kConclusion, S::kDiscussion});

  LabelSchema custom("custom", {{"banana"}});
  CHECK_THROWS_AS(default_section_map(custom), UsageError);
}

TEST_CASE("shipped section map file mirrors the default table for both schemas") {
  for (const LabelSchema& schema : {scicite_schema(), acl_arc_schema()}) {
    auto from_file = load_section_map(DATA_DIR "/section_map.json", schema);
    auto built_in = default_section_map(schema);
    REQUIRE(from_file.size() == built_in.size());
    for (const auto& [label, sections] : built_in) {
      CHECK(from_file.at(label) == sections);
    }
  }
}

TEST_CASE("load_section_map validates content") {
  TempDir tmp;
  CHECK_THROWS_AS(load_section_map(tmp.file("absent.json"), scicite_schema()), DataError);

  testutil::write_file(tmp.file("bad_section.json"),
                       "{\"background\": [\"appendix\"], \"method\": [\"methodology\"], "
                       "\"result\": [\"results\"]}");
  CHECK_THROWS_AS(load_section_map(tmp.file("bad_section.json"), scicite_schema()), DataError);

  testutil::write_file(tmp.file("uncovered.json"),
                       "{\"background\": [\"introduction\"], \"result\": [\"results\"]}");
  CHECK_THROWS_AS(load_section_map(tmp.file("uncovered.json"), scicite_schema()), DataError);

  testutil::write_file(tmp.file("malformed.json"), "{oops");
  CHECK_THROWS_AS(load_section_map(tmp.file("malformed.json"), scicite_schema()), DataError);
}

TEST_CASE("ingest_sections bookkeeping matches hand counts on the paper fixture") {
  auto stream = jsonl_paper_stream(FIXTURE_DIR "/papers_small.jsonl");
  IngestOptions options;
  options.quota = 100;
  SectionCorpus corpus = ingest_sections(stream, options);

  using S = CanonicalSection;
  CHECK(corpus.word_count(S::kIntroduction) == 14);  // cs-1 (8) + bio-5 (6)
  CHECK(corpus.word_count(S::kRelatedWork) == 7);
  CHECK(corpus.word_count(S::kMotivation) == 6);
  CHECK(corpus.word_count(S::kMethodology) == 11);  // cs-1 (7) + bio-5 (4)
  CHECK(corpus.word_count(S::kEvaluation) == 7);
  CHECK(corpus.word_count(S::kResults) == 7);
  CHECK(corpus.word_count(S::kDiscussion) == 7);
  CHECK(corpus.word_count(S::kConclusion) == 5);
  CHECK(corpus.papers_consumed() == 4);   // the two broken records contribute nothing
  CHECK(corpus.records_skipped() == 2);   // one malformed line, one bad body_text
  CHECK_FALSE(corpus.all_sections_full());

  // stopwords and short tokens never reach the corpus
  CHECK(corpus.words(S::kMethodology) ==
        std::vector<std::string>{"encoder", "applies", "layered", "attention", "blocks",
                                 "residual", "connections", "samples", "cultured", "controlled",
                                 "conditions"});
  CHECK(corpus.words(S::kConclusion) ==
        std::vector<std::string>{"future", "extensions", "cover", "multilingual", "corpora"});
}

TEST_CASE("ingest_sections field-of-study filter excludes mismatched papers only") {
  auto stream = jsonl_paper_stream(FIXTURE_DIR "/papers_small.jsonl");
  IngestOptions options;
  options.quota = 100;
  options.field_of_study = "computer science";  // case-insensitive match
  SectionCorpus corpus = ingest_sections(stream, options);

  using S = CanonicalSection;
  CHECK(corpus.word_count(S::kIntroduction) == 8);  // biology paper filtered out
  CHECK(corpus.word_count(S::kMethodology) == 7);
  CHECK(corpus.word_count(S::kRelatedWork) == 7);  // records without a field pass through
  CHECK(corpus.papers_consumed() == 3);
  CHECK(corpus.records_skipped() == 2);
}

TEST_CASE("ingest_sections stops reading once every quota is met") {
  auto stream = jsonl_paper_stream(FIXTURE_DIR "/papers_small.jsonl");
  IngestOptions options;
  options.quota = 3;
  SectionCorpus corpus = ingest_sections(stream, options);

  using S = CanonicalSection;
  for (S s : all_sections()) CHECK(corpus.word_count(s) == 3);
  CHECK(corpus.all_sections_full());
  CHECK(corpus.words(S::kIntroduction) == std::vector<std::string>{"deep", "neural", "networks"});
  CHECK(corpus.words(S::kResults) == std::vector<std::string>{"scores", "improve", "markedly"});
  // the biology paper and the trailing broken record were never consumed
  CHECK(corpus.papers_consumed() == 3);
  CHECK(corpus.records_skipped() == 1);
}

TEST_CASE("ingest_sections rejects a zero quota") {
  auto stream = jsonl_paper_stream(FIXTURE_DIR "/papers_small.jsonl");
  IngestOptions options;
  options.quota = 0;
  CHECK_THROWS_AS(ingest_sections(stream, options), UsageError);
}

TEST_CASE("jsonl_paper_stream reports a missing file") {
  CHECK_THROWS_AS(jsonl_paper_stream("/nonexistent/papers.jsonl"), DataError);
}

TEST_CASE("unique_words deduplicates while preserving first occurrence") {
  PaperStream stream = [served = false]() mutable -> std::optional<ParsedPaper> {
    if (served) return std::nullopt;
    served = true;
    ParsedPaper paper;
    paper.paper_id = "p";
    paper.sections.emplace_back("Methods", "model gradient model gradient model");
    return paper;
  };
  IngestOptions options;
  options.quota = 10;
  SectionCorpus corpus = ingest_sections(stream, options);
  CHECK(corpus.word_count(CanonicalSection::kMethodology) == 5);
  CHECK(corpus.unique_words(CanonicalSection::kMethodology) ==
        std::vector<std::string>{"model", "gradient"});
}

TEST_CASE("corpus save and load round trip preserves content and bookkeeping") {
  auto stream = jsonl_paper_stream(FIXTURE_DIR "/papers_small.jsonl");
  IngestOptions options;
  options.quota = 100;
  SectionCorpus corpus = ingest_sections(stream, options);

  TempDir tmp;
  save_corpus(corpus, tmp.file("corpus"));
  for (CanonicalSection s : all_sections()) {
    CHECK(testutil::exists(tmp.file("corpus/" + section_name(s) + ".txt")));
  }
  REQUIRE(testutil::exists(tmp.file("corpus/manifest.json")));

  SectionCorpus loaded = load_corpus(tmp.file("corpus"));
  CHECK(loaded.quota() == corpus.quota());
  CHECK(loaded.papers_consumed() == corpus.papers_consumed());
  CHECK(loaded.records_skipped() == corpus.records_skipped());
  CHECK(loaded.content_hash() == corpus.content_hash());
  for (CanonicalSection s : all_sections()) {
    CHECK(loaded.words(s) == corpus.words(s));
  }

  CHECK_THROWS_AS(load_corpus(tmp.file("nowhere")), DataError);
}

TEST_CASE("section corpus rejects buckets beyond the quota") {
  std::array<std::vector<std::string>, kNumSections> words;
  words[0] = {"alpha", "beta", "gamma"};
  CHECK_THROWS_AS(SectionCorpus(2, std::move(words), 1, 0), DataError);
}

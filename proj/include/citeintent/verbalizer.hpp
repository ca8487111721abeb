#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "citeintent/corpus.hpp"
#include "citeintent/embedding.hpp"
#include "citeintent/labels.hpp"
#include "citeintent/mask_distribution.hpp"
#include "citeintent/sections.hpp"

namespace citeintent {

// Hand-picked seed words per label; the only human supervision that enters
// the label-word mapping.
using AnchorSet = std::map<Label, std::vector<std::string>>;

// The shipped anchor table (see kAnchorTableVersion). Throws UsageError for
// labels outside the built-in schemas.
AnchorSet default_anchors(const LabelSchema& schema);

// Anchors must be lowercase single words and cover every schema label.
void validate_anchor_set(const AnchorSet& anchors, const LabelSchema& schema);

// Loads a custom anchor file, JSON: {"label": ["word", ...], ...}.
AnchorSet load_anchor_set(const std::string& path, const LabelSchema& schema);

// One label word with its provenance: the anchor it was expanded from and
// the corpus section it was mined in. The label's own anchors carry no
// section — that is what marks them exempt from refinement removal.
struct LabelWordEntry {
  std::string word;
  double weight = 0.0;
  std::string anchor;
  std::optional<CanonicalSection> section;

  bool is_anchor() const { return !section.has_value(); }
};

// Construction/refinement provenance stored alongside the label words.
struct VerbalizerManifest {
  std::string tool_version;
  std::size_t expansion_k = 0;
  std::string embedding_id;
  std::string corpus_hash;
  std::string anchor_version;
  std::vector<std::string> refinements;  // applied refinement steps, in order
  std::string pipeline_fingerprint;      // inputs digest of the last refinement pipeline
  bool learnable_weights = false;
};

// The label-word mapping: per label, a weighted word set whose mask-position
// mass is aggregated into that label's score. Immutable in normal use;
// weight mutation is reserved for refinement and training.
class Verbalizer {
 public:
  Verbalizer(LabelSchema schema, std::map<Label, std::vector<LabelWordEntry>> entries,
             VerbalizerManifest manifest);

  const LabelSchema& schema() const { return schema_; }
  const std::vector<LabelWordEntry>& entries(const Label& label) const;
  std::vector<std::string> words(const Label& label) const;

  // Union of words across labels, sorted and deduplicated — the tracked set
  // for prior estimation and calibration.
  std::vector<std::string> all_words() const;

  const VerbalizerManifest& manifest() const { return manifest_; }
  VerbalizerManifest& manifest() { return manifest_; }

  // Replaces one label's entry list (refinement); re-validate afterwards.
  void set_entries(const Label& label, std::vector<LabelWordEntry> entries);

  // Replaces one label's weights in entry order (training updates).
  void set_weights(const Label& label, const std::vector<double>& weights);

  // Rescales each label's weights to sum to one.
  void normalize_weights();

  // Enforces: every label non-empty, words unique within a label, weights
  // finite/non-negative and summing to 1 +- 1e-9. Throws ModelError.
  void validate() const;

  std::uint64_t content_hash() const;

 private:
  LabelSchema schema_;
  std::map<Label, std::vector<LabelWordEntry>> entries_;
  VerbalizerManifest manifest_;
};

// Expands each label's anchors over its mapped sections: the union of
// top_k_similar(anchor, section words, k) over all (anchor, section) pairs,
// plus the anchors themselves; initial weights uniform within each label.
Verbalizer build_verbalizer(const LabelSchema& schema, const AnchorSet& anchors,
                            const LabelSectionMap& section_map, const SectionCorpus& corpus,
                            const EmbeddingProvider& embedder, std::size_t k);

// Degenerate build: anchors only, uniform weights. Used by tests and as a
// corpus-free starting point.
Verbalizer make_anchor_verbalizer(const LabelSchema& schema, const AnchorSet& anchors);

// Words that could not be scored against a vocabulary, collected during
// score_labels for the caller to surface.
struct ResolutionLog {
  std::vector<std::string> unresolved;   // contributed zero probability
  std::vector<std::string> multi_piece;  // scored by their first piece
};

// score(y) = sum over the label's words of weight * p(word). Unresolvable
// words count as zero and are logged.
std::map<Label, double> score_labels(const MaskDistribution& dist, const Verbalizer& verbalizer,
                                     ResolutionLog* log = nullptr);

// Argmax of score_labels; ties broken by schema label order.
Label predict(const MaskDistribution& dist, const Verbalizer& verbalizer,
              ResolutionLog* log = nullptr);

// JSON file: {"version", "schema", "manifest", "labels"}; lossless round
// trip including weights, provenance, and manifest.
void save_verbalizer(const Verbalizer& verbalizer, const std::string& path);
Verbalizer load_verbalizer(const std::string& path);

}  // namespace citeintent

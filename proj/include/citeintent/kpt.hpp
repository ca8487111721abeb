#pragma once

#include <map>
#include <string>
#include <vector>

#include "citeintent/mlm.hpp"
#include "citeintent/prompt_template.hpp"
#include "citeintent/verbalizer.hpp"

namespace citeintent {

// Mean mask-position probability of each tracked word across a support set
// of rendered prompts: the contextualized prior used for the frequency cut
// and for calibration.
struct PriorEstimate {
  std::map<std::string, double> word_prior;
  std::size_t support_size = 0;

  // Untracked words carry prior zero.
  double prior_of(const std::string& word) const;

  void validate() const;  // priors in [0,1], support_size > 0
};

struct RefinementConfig {
  double frequency_quantile = 0.25;  // in [0,1)
  double relevance_threshold = 1.0;  // non-negative; 0 disables removals
  std::size_t min_words_per_label = 3;
  std::size_t support_size = 200;  // unlabeled train instances

  void validate() const;
};

// Words each label lost plus any per-label warnings (e.g. a label no support
// prompt was predicted as).
struct RefinementReport {
  std::map<Label, std::vector<std::string>> dropped;
  std::vector<std::string> warnings;
};

// Linear-interpolation quantile of the values at fraction q in [0, 1].
// Exposed so tests can oracle the frequency cut.
double quantile(std::vector<double> values, double q);

PriorEstimate estimate_priors(MaskedLanguageModel& mlm, const PromptTemplate& tmpl,
                              const std::vector<std::string>& support_texts,
                              const std::vector<std::string>& tracked_words);

// Drops, per label, the words whose prior falls below the label's
// frequency_quantile quantile — rarely predicted words the model can hardly
// produce. Anchors are exempt; at least min_words_per_label words survive
// (highest-prior first).
Verbalizer frequency_refine(const Verbalizer& verbalizer, const PriorEstimate& priors,
                            const RefinementConfig& config, RefinementReport* report = nullptr);

// Drops words that are no likelier under prompts predicted as their own
// label than under all prompts: relevance(w, y) = mean p(w | predicted y) /
// mean p(w), floored denominator; words below relevance_threshold go, with
// the same anchor and floor guards. Labels that win no support prediction
// are skipped with a warning.
Verbalizer relevance_refine(const Verbalizer& verbalizer, MaskedLanguageModel& mlm,
                            const PromptTemplate& tmpl,
                            const std::vector<std::string>& support_texts,
                            const RefinementConfig& config, RefinementReport* report = nullptr);

// Divides each tracked word's probability by its contextualized prior and
// renormalizes over the tracked set; all other vocabulary mass drops to
// zero. Counteracts the model's general preference for frequent words.
MaskDistribution calibrate(const MaskDistribution& dist, const PriorEstimate& priors);

// Marks per-word weights trainable and re-initializes them uniform within
// each label; training renormalizes them to a simplex after each update.
Verbalizer attach_learnable_weights(const Verbalizer& verbalizer);

struct PipelineOutcome {
  Verbalizer verbalizer;
  PriorEstimate priors;  // restricted to the surviving words
  RefinementReport report;
  bool skipped = false;  // inputs matched the recorded fingerprint; no-op
};

// The fixed refinement order: estimate priors, frequency cut, relevance cut.
// The refined verbalizer records a fingerprint of (model, template, support
// set, config); re-running the pipeline on its own output with the same
// inputs is a no-op.
PipelineOutcome refine_pipeline(const Verbalizer& verbalizer, MaskedLanguageModel& mlm,
                                const PromptTemplate& tmpl,
                                const std::vector<std::string>& support_texts,
                                const RefinementConfig& config);

// Prior files: {"version", "tool_version", "support_size", "priors"}.
void save_priors(const PriorEstimate& priors, const std::string& path);
PriorEstimate load_priors(const std::string& path);

}  // namespace citeintent

#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "citeintent/kpt.hpp"
#include "citeintent/mlm.hpp"
#include "citeintent/prompt_template.hpp"
#include "citeintent/verbalizer.hpp"

namespace citeintent {

struct Classification {
  Label label;
  std::map<Label, double> scores;
};

// The whole inference path for one citation sentence: render the template,
// query the mask distribution, optionally calibrate it against contextualized
// priors, and aggregate label-word mass into a prediction.
Classification classify(MaskedLanguageModel& mlm, const PromptTemplate& tmpl,
                        const Verbalizer& verbalizer, const std::string& text,
                        const PriorEstimate* calibration = nullptr,
                        std::size_t max_len_override = 0, ResolutionLog* log = nullptr);

}  // namespace citeintent

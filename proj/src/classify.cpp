#include "citeintent/classify.hpp"

#include "citeintent/errors.hpp"

namespace citeintent {

Classification classify(MaskedLanguageModel& mlm, const PromptTemplate& tmpl,
                        const Verbalizer& verbalizer, const std::string& text,
                        const PriorEstimate* calibration, std::size_t max_len_override,
                        ResolutionLog* log) {
  if (text.empty()) throw DataError("cannot classify an empty citation sentence");
  MaskDistribution dist = predict_mask(mlm, tmpl.render(text), max_len_override);
  if (calibration) dist = calibrate(dist, *calibration);

  Classification out;
  out.scores = score_labels(dist, verbalizer, log);
  const auto& labels = verbalizer.schema().labels();
  out.label = labels.front();
  double best = out.scores.at(out.label);
  for (const Label& label : labels) {
    if (out.scores.at(label) > best) {
      out.label = label;
      best = out.scores.at(label);
    }
  }
  return out;
}

}  // namespace citeintent

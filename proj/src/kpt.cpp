#include "citeintent/kpt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "citeintent/errors.hpp"
#include "citeintent/hash.hpp"
#include "citeintent/version.hpp"

namespace citeintent {

namespace {

using json = nlohmann::ordered_json;

constexpr int kPriorFileVersion = 1;

std::string format_number(double value) { return nlohmann::json(value).dump(); }

// Survivors keep their relative weights, rescaled to a simplex.
std::vector<LabelWordEntry> renormalized(std::vector<LabelWordEntry> entries) {
  double sum = 0.0;
  for (const auto& e : entries) sum += e.weight;
  if (sum <= 0.0) throw ModelError("refinement left a label with zero total weight");
  for (auto& e : entries) e.weight /= sum;
  return entries;
}

// Shared cut logic: drop non-anchor entries whose rank value falls below the
// threshold, keeping at least min_keep entries (highest value first; ties by
// word for determinism).
std::vector<LabelWordEntry> cut_below(const std::vector<LabelWordEntry>& entries,
                                      const std::vector<double>& values, double threshold,
                                      std::size_t min_keep, std::vector<std::string>* dropped) {
  std::vector<std::size_t> candidates;  // droppable, sorted worst first
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!entries[i].is_anchor() && values[i] < threshold) candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return entries[a].word > entries[b].word;
  });
  std::size_t allowed = entries.size() > min_keep ? entries.size() - min_keep : 0;
  if (candidates.size() > allowed) candidates.resize(allowed);

  std::set<std::size_t> drop(candidates.begin(), candidates.end());
  std::vector<LabelWordEntry> kept;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (drop.count(i)) {
      if (dropped) dropped->push_back(entries[i].word);
    } else {
      kept.push_back(entries[i]);
    }
  }
  return renormalized(std::move(kept));
}

void merge_into(RefinementReport& target, const RefinementReport& extra) {
  for (const auto& [label, words] : extra.dropped) {
    auto& dst = target.dropped[label];
    dst.insert(dst.end(), words.begin(), words.end());
  }
  target.warnings.insert(target.warnings.end(), extra.warnings.begin(), extra.warnings.end());
}

}  // namespace

double PriorEstimate::prior_of(const std::string& word) const {
  auto it = word_prior.find(word);
  return it == word_prior.end() ? 0.0 : it->second;
}

void PriorEstimate::validate() const {
  if (support_size == 0) throw ModelError("prior estimate has an empty support set");
  for (const auto& [word, p] : word_prior) {
    if (word.empty()) throw ModelError("prior estimate tracks an empty word");
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ModelError("prior for '" + word + "' is outside [0, 1]");
    }
  }
}

void RefinementConfig::validate() const {
  if (!(frequency_quantile >= 0.0 && frequency_quantile < 1.0)) {
    throw UsageError("frequency_quantile must lie in [0, 1)");
  }
  if (!(relevance_threshold >= 0.0) || !std::isfinite(relevance_threshold)) {
    throw UsageError("relevance_threshold must be non-negative");
  }
  if (min_words_per_label == 0) throw UsageError("min_words_per_label must be positive");
  if (support_size == 0) throw UsageError("support_size must be positive");
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw UsageError("quantile of an empty list");
  if (!(q >= 0.0 && q <= 1.0)) throw UsageError("quantile fraction must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  double h = q * static_cast<double>(values.size() - 1);
  std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

PriorEstimate estimate_priors(MaskedLanguageModel& mlm, const PromptTemplate& tmpl,
                              const std::vector<std::string>& support_texts,
                              const std::vector<std::string>& tracked_words) {
  if (support_texts.empty()) throw UsageError("prior estimation needs a non-empty support set");
  if (tracked_words.empty()) throw UsageError("prior estimation needs tracked words");
  PriorEstimate out;
  out.support_size = support_texts.size();
  for (const auto& word : tracked_words) out.word_prior[word] = 0.0;
  for (const auto& text : support_texts) {
    MaskDistribution dist = predict_mask(mlm, tmpl.render(text));
    for (auto& [word, sum] : out.word_prior) sum += dist.prob_of(word);
  }
  for (auto& [word, sum] : out.word_prior) sum /= static_cast<double>(support_texts.size());
  out.validate();
  return out;
}

Verbalizer frequency_refine(const Verbalizer& verbalizer, const PriorEstimate& priors,
                            const RefinementConfig& config, RefinementReport* report) {
  config.validate();
  priors.validate();
  verbalizer.validate();

  std::map<Label, std::vector<LabelWordEntry>> refined;
  RefinementReport local;
  for (const Label& label : verbalizer.schema().labels()) {
    const auto& entries = verbalizer.entries(label);
    std::vector<double> values;
    for (const auto& e : entries) values.push_back(priors.prior_of(e.word));
    double threshold = quantile(values, config.frequency_quantile);
    refined[label] =
        cut_below(entries, values, threshold, config.min_words_per_label, &local.dropped[label]);
  }

  VerbalizerManifest manifest = verbalizer.manifest();
  manifest.refinements.push_back("frequency(quantile=" +
                                 format_number(config.frequency_quantile) + ")");
  if (report) merge_into(*report, local);
  return {verbalizer.schema(), std::move(refined), std::move(manifest)};
}

Verbalizer relevance_refine(const Verbalizer& verbalizer, MaskedLanguageModel& mlm,
                            const PromptTemplate& tmpl,
                            const std::vector<std::string>& support_texts,
                            const RefinementConfig& config, RefinementReport* report) {
  config.validate();
  verbalizer.validate();
  if (support_texts.empty()) throw UsageError("relevance refinement needs a support set");

  // One pass over the support set: per-word probabilities grouped by the
  // prompt's current zero-shot prediction.
  const auto words = verbalizer.all_words();
  std::unordered_map<std::string, double> global_sum;
  std::map<Label, std::unordered_map<std::string, double>> label_sum;
  std::map<Label, std::size_t> label_count;
  for (const auto& text : support_texts) {
    MaskDistribution dist = predict_mask(mlm, tmpl.render(text));
    Label predicted = predict(dist, verbalizer);
    ++label_count[predicted];
    for (const auto& word : words) {
      double p = dist.prob_of(word);
      global_sum[word] += p;
      label_sum[predicted][word] += p;
    }
  }

  double n = static_cast<double>(support_texts.size());
  std::map<Label, std::vector<LabelWordEntry>> refined;
  RefinementReport local;
  for (const Label& label : verbalizer.schema().labels()) {
    const auto& entries = verbalizer.entries(label);
    if (label_count[label] == 0) {
      local.warnings.push_back("no support prompt was predicted as '" + label.name +
                               "'; relevance refinement skipped for it");
      refined[label] = entries;
      continue;
    }
    double group = static_cast<double>(label_count[label]);
    std::vector<double> relevance;
    for (const auto& e : entries) {
      double label_mean = label_sum[label][e.word] / group;
      double global_mean = global_sum[e.word] / n;
      relevance.push_back(label_mean /
                          std::max(global_mean, std::numeric_limits<double>::epsilon()));
    }
    refined[label] = cut_below(entries, relevance, config.relevance_threshold,
                               config.min_words_per_label, &local.dropped[label]);
  }

  VerbalizerManifest manifest = verbalizer.manifest();
  manifest.refinements.push_back("relevance(threshold=" +
                                 format_number(config.relevance_threshold) + ")");
  if (report) merge_into(*report, local);
  return {verbalizer.schema(), std::move(refined), std::move(manifest)};
}

MaskDistribution calibrate(const MaskDistribution& dist, const PriorEstimate& priors) {
  priors.validate();
  if (priors.word_prior.empty()) throw UsageError("calibration needs a non-empty tracked set");
  if (!dist.vocab) throw ModelError("mask distribution has no vocabulary");

  // Distinct words can resolve to one vocabulary id (first-piece collisions);
  // both then see the same probability and the same estimated prior, so
  // overwriting is well-defined.
  std::map<std::size_t, double> ratio_by_id;
  for (const auto& [word, prior] : priors.word_prior) {
    auto resolved = dist.vocab->resolve(word);
    if (!resolved) continue;
    ratio_by_id[resolved->id] =
        dist.probs.at(resolved->id) / std::max(prior, std::numeric_limits<double>::epsilon());
  }
  double total = 0.0;
  for (const auto& [id, ratio] : ratio_by_id) total += ratio;
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ModelError("calibration produced no probability mass over the tracked set");
  }

  MaskDistribution out;
  out.vocab = dist.vocab;
  out.probs.assign(dist.vocab->size(), 0.0);
  for (const auto& [id, ratio] : ratio_by_id) out.probs[id] = ratio / total;
  return out;
}

Verbalizer attach_learnable_weights(const Verbalizer& verbalizer) {
  verbalizer.validate();
  std::map<Label, std::vector<LabelWordEntry>> entries;
  for (const Label& label : verbalizer.schema().labels()) {
    auto list = verbalizer.entries(label);
    double w = 1.0 / static_cast<double>(list.size());
    for (auto& e : list) e.weight = w;
    entries[label] = std::move(list);
  }
  VerbalizerManifest manifest = verbalizer.manifest();
  if (!manifest.learnable_weights) {
    manifest.learnable_weights = true;
    manifest.refinements.push_back("learnable_weights");
  }
  return {verbalizer.schema(), std::move(entries), std::move(manifest)};
}

PipelineOutcome refine_pipeline(const Verbalizer& verbalizer, MaskedLanguageModel& mlm,
                                const PromptTemplate& tmpl,
                                const std::vector<std::string>& support_texts,
                                const RefinementConfig& config) {
  config.validate();
  if (support_texts.empty()) throw UsageError("refinement pipeline needs a support set");

  std::uint64_t h = fnv1a(mlm.identity());
  h = fnv1a(mlm.state_hash(), h);
  h = fnv1a(tmpl.pattern(), h);
  for (const auto& text : support_texts) h = fnv1a(text, h);
  h = fnv1a_double(config.frequency_quantile, h);
  h = fnv1a_double(config.relevance_threshold, h);
  h = fnv1a_u64(config.min_words_per_label, h);
  std::string fingerprint = hash_hex(h);

  PipelineOutcome out{verbalizer, {}, {}, false};
  if (verbalizer.manifest().pipeline_fingerprint == fingerprint) {
    // Already refined against exactly these inputs; re-running would only
    // re-cut the survivors. Recompute the priors for calibration and stop.
    out.skipped = true;
    out.priors = estimate_priors(mlm, tmpl, support_texts, verbalizer.all_words());
    return out;
  }

  PriorEstimate priors = estimate_priors(mlm, tmpl, support_texts, verbalizer.all_words());
  Verbalizer refined = frequency_refine(verbalizer, priors, config, &out.report);
  refined = relevance_refine(refined, mlm, tmpl, support_texts, config, &out.report);
  refined.manifest().pipeline_fingerprint = fingerprint;

  out.priors.support_size = priors.support_size;
  for (const auto& word : refined.all_words()) {
    out.priors.word_prior[word] = priors.prior_of(word);
  }
  out.verbalizer = std::move(refined);
  return out;
}

void save_priors(const PriorEstimate& priors, const std::string& path) {
  priors.validate();
  json doc;
  doc["version"] = kPriorFileVersion;
  doc["tool_version"] = kToolVersion;
  doc["support_size"] = priors.support_size;
  json table;
  for (const auto& [word, p] : priors.word_prior) table[word] = p;
  doc["priors"] = table;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write prior file: " + path);
  out << doc.dump(2) << "\n";
}

PriorEstimate load_priors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open prior file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("prior file " + path + " is not valid JSON: " + e.what());
  }
  try {
    if (doc.at("version").get<int>() != kPriorFileVersion) {
      throw DataError("prior file " + path + " has an unsupported version");
    }
    PriorEstimate out;
    out.support_size = doc.at("support_size").get<std::size_t>();
    for (const auto& [word, p] : doc.at("priors").items()) {
      out.word_prior[word] = p.get<double>();
    }
    out.validate();
    return out;
  } catch (const json::exception& e) {
    throw DataError("prior file " + path + " is malformed: " + e.what());
  }
}

}  // namespace citeintent

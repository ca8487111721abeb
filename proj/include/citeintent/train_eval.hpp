#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "citeintent/dataset.hpp"
#include "citeintent/kpt.hpp"
#include "citeintent/labels.hpp"
#include "citeintent/mlm.hpp"
#include "citeintent/prompt_template.hpp"
#include "citeintent/verbalizer.hpp"

namespace citeintent {

enum class Regime { kSupervised, kFewShot, kZeroShot };

std::string regime_name(Regime regime);
Regime parse_regime(const std::string& name);

struct TrainConfig {
  std::size_t max_sequence_length = 512;
  std::size_t batch_size = 40;
  std::size_t epochs = 5;
  double learning_rate = 2e-5;          // linear decay to zero, no warmup
  bool learn_verbalizer_weights = true; // train per-word weights with the model
  double verbalizer_learning_rate = 0.01;

  void validate() const;
};

struct ExperimentConfig {
  Regime regime = Regime::kSupervised;
  std::size_t k_shot = 0;  // labeled instances per class when regime is few-shot
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  TrainConfig train;
  RefinementConfig refinement;  // supplies support_size for calibration
  std::string template_pattern;  // empty means the default template
  std::optional<bool> calibrate;  // unset: off for supervised, on otherwise

  bool effective_calibrate() const;
  void validate() const;
};

class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(LabelSchema schema);
  ConfusionMatrix(LabelSchema schema, std::vector<std::vector<std::size_t>> counts);

  const LabelSchema& schema() const { return schema_; }
  const std::vector<std::vector<std::size_t>>& counts() const { return counts_; }
  std::size_t total() const { return total_; }

  void add(const Label& gold, const Label& predicted);

  double accuracy() const;  // trace / total
  std::vector<double> per_label_f1() const;
  double macro_f1() const;

  // Each row divided by its sum (fractions); all-zero rows stay zero.
  std::vector<std::vector<double>> row_normalized() const;

  bool operator==(const ConfusionMatrix& other) const {
    return schema_ == other.schema_ && counts_ == other.counts_;
  }

 private:
  LabelSchema schema_;
  std::vector<std::vector<std::size_t>> counts_;
  std::size_t total_ = 0;
};

// Unweighted mean of per-label F1; a label with precision + recall == 0
// contributes zero.
double macro_f1(const ConfusionMatrix& confusion);

// Row-normalized percentage matrix for plotting and error analysis.
std::vector<std::vector<double>> confusion_report(const ConfusionMatrix& confusion);

struct SeedResult {
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  ConfusionMatrix confusion;
};

// Seed-averaged experiment outcome; the unit of record for every run.
struct EvalReport {
  LabelSchema schema;
  std::vector<SeedResult> per_seed;
  double mean_accuracy = 0.0;
  double mean_macro_f1 = 0.0;
  std::vector<std::vector<double>> mean_confusion;  // mean of row-normalized fractions
  nlohmann::json config;  // resolved config snapshot
  std::string tool_version;

  nlohmann::json to_json() const;
  static EvalReport from_json(const nlohmann::json& doc);

  std::string to_text_table() const;  // metrics and confusion as percentages
  std::string to_csv() const;         // mean confusion, percentages
};

void save_report(const EvalReport& report, const std::string& path);
EvalReport load_report(const std::string& path);

// ---- cross-entropy machinery (shared by training and gradient checks) ----

// Verbalizer words resolved against a model vocabulary: per schema label,
// (vocabulary id, weight) pairs plus the entry index each pair came from.
struct ResolvedVerbalizer {
  std::vector<std::vector<std::pair<std::size_t, double>>> label_words;
  std::vector<std::vector<std::size_t>> entry_indices;
};

ResolvedVerbalizer resolve_verbalizer(const Verbalizer& verbalizer, const Vocabulary& vocab,
                                      ResolutionLog* log = nullptr);

std::vector<double> softmax(const std::vector<double>& logits);

// s_y = sum over the label's words of weight * p(word id).
std::vector<double> label_scores(const ResolvedVerbalizer& resolved,
                                 const std::vector<double>& probs);

// Mean over the batch of -log softmax(label scores)[gold].
double batch_loss(const ResolvedVerbalizer& resolved,
                  const std::vector<std::vector<double>>& probs,
                  const std::vector<std::size_t>& gold);

// dL/ds per sample: (softmax(s) - onehot(gold)) / batch.
std::vector<std::vector<double>> batch_grad_scores(const ResolvedVerbalizer& resolved,
                                                   const std::vector<std::vector<double>>& probs,
                                                   const std::vector<std::size_t>& gold);

// dL/dp per sample, chained through the label-word weights.
std::vector<std::vector<double>> batch_grad_probs(const ResolvedVerbalizer& resolved,
                                                  const std::vector<std::vector<double>>& probs,
                                                  const std::vector<std::size_t>& gold,
                                                  std::size_t vocab_size);

// ---- the operations ----

struct TrainStats {
  std::vector<double> epoch_losses;
  std::size_t steps = 0;
};

// Minimizes cross-entropy between softmaxed label scores and gold labels,
// updating model parameters and (when attached) verbalizer weights, which
// are clamped non-negative and renormalized after every step. Deterministic
// given the seed. Throws ModelError with a state dump if the loss diverges.
TrainStats fine_tune(TrainableMlm& mlm, Verbalizer& verbalizer, const PromptTemplate& tmpl,
                     const Dataset& train, const TrainConfig& config, std::uint64_t seed);

struct EvalOutcome {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  ConfusionMatrix confusion;
};

EvalOutcome evaluate(MaskedLanguageModel& mlm, const Verbalizer& verbalizer,
                     const PromptTemplate& tmpl, const Dataset& test,
                     const PriorEstimate* calibration = nullptr,
                     std::size_t max_sequence_length = 0);

// Builds one model per seed; zero-shot runs must not mutate it.
using ModelFactory = std::function<MlmPtr(std::uint64_t seed)>;

// Per seed: (sample the few-shot subset) -> (fine-tune unless zero-shot) ->
// (estimate priors for calibration) -> evaluate; then aggregate. Any seed
// failure aborts the whole run — no silent averaging over fewer seeds.
EvalReport run_experiment(const ExperimentConfig& config, const ModelFactory& factory,
                          const Verbalizer& verbalizer, const Dataset& train,
                          const Dataset& test);

}  // namespace citeintent

#include "citeintent/train_eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "citeintent/classify.hpp"
#include "citeintent/errors.hpp"
#include "citeintent/hash.hpp"
#include "citeintent/rng.hpp"
#include "citeintent/version.hpp"

namespace citeintent {

namespace {

using json = nlohmann::json;

// Seed salts keep the shuffling, support-sampling, and few-shot streams
// independent: a k-shot run that happens to cover the whole train set must
// train exactly like the supervised run with the same seed.
constexpr std::uint64_t kShuffleSalt = 0x9e3779b97f4a7c15ull;
constexpr std::uint64_t kSupportSalt = 0x517cc1b727220a95ull;

constexpr double kWeightFloor = 1e-12;  // keeps learned weights renormalizable

std::vector<std::string> support_texts(const Dataset& train, std::size_t support_size,
                                       std::uint64_t seed) {
  if (train.size() == 0) {
    throw UsageError("calibration needs a train split to sample support texts from");
  }
  std::size_t take = std::min(support_size, train.size());
  Rng rng(seed ^ kSupportSalt);
  std::vector<std::string> texts;
  for (std::size_t i : rng.sample_indices(train.size(), take)) {
    texts.push_back(train.instances()[i].text);
  }
  return texts;
}

}  // namespace

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::kSupervised: return "supervised";
    case Regime::kFewShot: return "few-shot";
    case Regime::kZeroShot: return "zero-shot";
  }
  throw UsageError("unknown regime");
}

Regime parse_regime(const std::string& name) {
  if (name == "supervised") return Regime::kSupervised;
  if (name == "few-shot" || name == "few_shot" || name == "k-shot" || name == "k_shot") {
    return Regime::kFewShot;
  }
  if (name == "zero-shot" || name == "zero_shot") return Regime::kZeroShot;
  throw UsageError("unknown regime '" + name +
                   "' (expected supervised, few-shot, or zero-shot)");
}

void TrainConfig::validate() const {
  if (max_sequence_length < 16) throw UsageError("max_sequence_length must be at least 16");
  if (batch_size == 0) throw UsageError("batch_size must be positive");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw UsageError("learning_rate must be positive");
  }
  if (!(verbalizer_learning_rate >= 0.0) || !std::isfinite(verbalizer_learning_rate)) {
    throw UsageError("verbalizer_learning_rate must be non-negative");
  }
}

bool ExperimentConfig::effective_calibrate() const {
  return calibrate.value_or(regime != Regime::kSupervised);
}

void ExperimentConfig::validate() const {
  train.validate();
  refinement.validate();
  if (seeds.empty()) throw UsageError("at least one seed is required");
  if (regime == Regime::kFewShot && k_shot == 0) {
    throw UsageError("few-shot regime needs k_shot >= 1");
  }
  if (!template_pattern.empty()) PromptTemplate{template_pattern};  // validates slots
}

ConfusionMatrix::ConfusionMatrix(LabelSchema schema) : schema_(std::move(schema)) {
  if (schema_.size() == 0) throw UsageError("confusion matrix needs a non-empty schema");
  counts_.assign(schema_.size(), std::vector<std::size_t>(schema_.size(), 0));
}

ConfusionMatrix::ConfusionMatrix(LabelSchema schema, std::vector<std::vector<std::size_t>> counts)
    : schema_(std::move(schema)), counts_(std::move(counts)) {
  if (counts_.size() != schema_.size()) throw DataError("confusion matrix shape mismatch");
  for (const auto& row : counts_) {
    if (row.size() != schema_.size()) throw DataError("confusion matrix shape mismatch");
    for (std::size_t c : row) total_ += c;
  }
}

void ConfusionMatrix::add(const Label& gold, const Label& predicted) {
  auto g = schema_.index_of(gold);
  auto p = schema_.index_of(predicted);
  if (!g || !p) throw UsageError("label outside the confusion matrix schema");
  ++counts_[*g][*p];
  ++total_;
}

double ConfusionMatrix::accuracy() const {
  if (total_ == 0) throw UsageError("empty confusion matrix has no accuracy");
  std::size_t trace = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) trace += counts_[i][i];
  return static_cast<double>(trace) / static_cast<double>(total_);
}

std::vector<double> ConfusionMatrix::per_label_f1() const {
  if (total_ == 0) throw UsageError("empty confusion matrix has no F1");
  std::size_t n = schema_.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t tp = counts_[i][i];
    std::size_t gold = 0, predicted = 0;
    for (std::size_t j = 0; j < n; ++j) {
      gold += counts_[i][j];
      predicted += counts_[j][i];
    }
    double precision = predicted ? static_cast<double>(tp) / predicted : 0.0;
    double recall = gold ? static_cast<double>(tp) / gold : 0.0;
    out[i] = (precision + recall > 0.0) ? 2.0 * precision * recall / (precision + recall) : 0.0;
  }
  return out;
}

double ConfusionMatrix::macro_f1() const {
  auto f1 = per_label_f1();
  double sum = 0.0;
  for (double v : f1) sum += v;
  return sum / static_cast<double>(f1.size());
}

std::vector<std::vector<double>> ConfusionMatrix::row_normalized() const {
  std::vector<std::vector<double>> out(counts_.size(),
                                       std::vector<double>(counts_.size(), 0.0));
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    std::size_t row_sum = 0;
    for (std::size_t c : counts_[i]) row_sum += c;
    if (row_sum == 0) continue;
    for (std::size_t j = 0; j < counts_.size(); ++j) {
      out[i][j] = static_cast<double>(counts_[i][j]) / static_cast<double>(row_sum);
    }
  }
  return out;
}

double macro_f1(const ConfusionMatrix& confusion) { return confusion.macro_f1(); }

std::vector<std::vector<double>> confusion_report(const ConfusionMatrix& confusion) {
  auto out = confusion.row_normalized();
  for (auto& row : out) {
    for (auto& v : row) v *= 100.0;
  }
  return out;
}

// ---- report serialization ----

nlohmann::json EvalReport::to_json() const {
  json doc;
  doc["version"] = kEvalReportVersion;
  doc["tool_version"] = tool_version;
  doc["schema_name"] = schema.name();
  json names = json::array();
  for (const Label& label : schema.labels()) names.push_back(label.name);
  doc["schema"] = names;
  doc["config"] = config;
  json seeds = json::array();
  for (const auto& sr : per_seed) {
    json item;
    item["seed"] = sr.seed;
    item["accuracy"] = sr.accuracy;
    item["macro_f1"] = sr.macro_f1;
    item["confusion_counts"] = sr.confusion.counts();
    seeds.push_back(item);
  }
  doc["per_seed"] = seeds;
  doc["mean"] = json{{"accuracy", mean_accuracy}, {"macro_f1", mean_macro_f1}};
  doc["mean_confusion_row_normalized"] = mean_confusion;
  return doc;
}

EvalReport EvalReport::from_json(const nlohmann::json& doc) {
  try {
    if (doc.at("version").get<int>() != kEvalReportVersion) {
      throw DataError("evaluation report has an unsupported version");
    }
    EvalReport report;
    report.tool_version = doc.at("tool_version").get<std::string>();
    std::vector<Label> labels;
    for (const auto& name : doc.at("schema")) labels.push_back({name.get<std::string>()});
    report.schema = LabelSchema(doc.at("schema_name").get<std::string>(), labels);
    report.config = doc.at("config");
    for (const auto& item : doc.at("per_seed")) {
      SeedResult sr{item.at("seed").get<std::uint64_t>(), item.at("accuracy").get<double>(),
                    item.at("macro_f1").get<double>(),
                    ConfusionMatrix(report.schema,
                                    item.at("confusion_counts")
                                        .get<std::vector<std::vector<std::size_t>>>())};
      report.per_seed.push_back(std::move(sr));
    }
    report.mean_accuracy = doc.at("mean").at("accuracy").get<double>();
    report.mean_macro_f1 = doc.at("mean").at("macro_f1").get<double>();
    report.mean_confusion =
        doc.at("mean_confusion_row_normalized").get<std::vector<std::vector<double>>>();
    return report;
  } catch (const json::exception& e) {
    throw DataError(std::string("evaluation report is malformed: ") + e.what());
  }
}

std::string EvalReport::to_text_table() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "seed        accuracy    macro-F1\n";
  for (const auto& sr : per_seed) {
    out << std::left << std::setw(12) << sr.seed << std::right << std::setw(8)
        << sr.accuracy * 100.0 << std::setw(12) << sr.macro_f1 * 100.0 << "\n";
  }
  out << std::left << std::setw(12) << "mean" << std::right << std::setw(8)
      << mean_accuracy * 100.0 << std::setw(12) << mean_macro_f1 * 100.0 << "\n";

  std::size_t width = 12;
  for (const Label& label : schema.labels()) width = std::max(width, label.name.size() + 2);
  out << "\nmean confusion (row %, gold rows, predicted columns)\n";
  out << std::setw(static_cast<int>(width)) << "";
  for (const Label& label : schema.labels()) {
    out << std::setw(static_cast<int>(width)) << label.name;
  }
  out << "\n";
  for (std::size_t i = 0; i < schema.size(); ++i) {
    out << std::setw(static_cast<int>(width)) << schema.labels()[i].name;
    for (std::size_t j = 0; j < schema.size(); ++j) {
      out << std::setw(static_cast<int>(width)) << mean_confusion[i][j] * 100.0;
    }
    out << "\n";
  }
  return out.str();
}

std::string EvalReport::to_csv() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "gold\\predicted";
  for (const Label& label : schema.labels()) out << "," << label.name;
  out << "\n";
  for (std::size_t i = 0; i < schema.size(); ++i) {
    out << schema.labels()[i].name;
    for (std::size_t j = 0; j < schema.size(); ++j) {
      out << "," << mean_confusion[i][j] * 100.0;
    }
    out << "\n";
  }
  return out.str();
}

void save_report(const EvalReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write report file: " + path);
  out << report.to_json().dump(2) << "\n";
}

EvalReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open report file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("report file " + path + " is not valid JSON: " + e.what());
  }
  return EvalReport::from_json(doc);
}

// ---- cross-entropy machinery ----

ResolvedVerbalizer resolve_verbalizer(const Verbalizer& verbalizer, const Vocabulary& vocab,
                                      ResolutionLog* log) {
  ResolvedVerbalizer out;
  for (const Label& label : verbalizer.schema().labels()) {
    std::vector<std::pair<std::size_t, double>> words;
    std::vector<std::size_t> indices;
    const auto& entries = verbalizer.entries(label);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      auto resolved = vocab.resolve(entries[i].word);
      if (!resolved) {
        if (log) log->unresolved.push_back(entries[i].word);
        continue;
      }
      if (resolved->multi_piece && log) log->multi_piece.push_back(entries[i].word);
      words.emplace_back(resolved->id, entries[i].weight);
      indices.push_back(i);
    }
    out.label_words.push_back(std::move(words));
    out.entry_indices.push_back(std::move(indices));
  }
  return out;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  if (logits.empty()) throw UsageError("softmax of an empty vector");
  double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    total += out[i];
  }
  for (auto& v : out) v /= total;
  return out;
}

std::vector<double> label_scores(const ResolvedVerbalizer& resolved,
                                 const std::vector<double>& probs) {
  std::vector<double> scores(resolved.label_words.size(), 0.0);
  for (std::size_t y = 0; y < resolved.label_words.size(); ++y) {
    for (const auto& [id, weight] : resolved.label_words[y]) {
      scores[y] += weight * probs.at(id);
    }
  }
  return scores;
}

double batch_loss(const ResolvedVerbalizer& resolved,
                  const std::vector<std::vector<double>>& probs,
                  const std::vector<std::size_t>& gold) {
  if (probs.empty() || probs.size() != gold.size()) {
    throw UsageError("loss needs matching non-empty probability and gold lists");
  }
  double total = 0.0;
  for (std::size_t s = 0; s < probs.size(); ++s) {
    auto class_probs = softmax(label_scores(resolved, probs[s]));
    total += -std::log(class_probs.at(gold[s]));
  }
  return total / static_cast<double>(probs.size());
}

std::vector<std::vector<double>> batch_grad_scores(const ResolvedVerbalizer& resolved,
                                                   const std::vector<std::vector<double>>& probs,
                                                   const std::vector<std::size_t>& gold) {
  if (probs.empty() || probs.size() != gold.size()) {
    throw UsageError("gradient needs matching non-empty probability and gold lists");
  }
  double inv_batch = 1.0 / static_cast<double>(probs.size());
  std::vector<std::vector<double>> out;
  out.reserve(probs.size());
  for (std::size_t s = 0; s < probs.size(); ++s) {
    auto class_probs = softmax(label_scores(resolved, probs[s]));
    class_probs.at(gold[s]) -= 1.0;
    for (auto& v : class_probs) v *= inv_batch;
    out.push_back(std::move(class_probs));
  }
  return out;
}

std::vector<std::vector<double>> batch_grad_probs(const ResolvedVerbalizer& resolved,
                                                  const std::vector<std::vector<double>>& probs,
                                                  const std::vector<std::size_t>& gold,
                                                  std::size_t vocab_size) {
  auto grad_scores = batch_grad_scores(resolved, probs, gold);
  std::vector<std::vector<double>> out(probs.size(), std::vector<double>(vocab_size, 0.0));
  for (std::size_t s = 0; s < probs.size(); ++s) {
    for (std::size_t y = 0; y < resolved.label_words.size(); ++y) {
      double g = grad_scores[s][y];
      for (const auto& [id, weight] : resolved.label_words[y]) {
        out[s].at(id) += g * weight;
      }
    }
  }
  return out;
}

// ---- training ----

namespace {

// Adaptive-moment update state for one label's word weights.
struct WeightAdam {
  std::vector<double> m, v;
  std::uint64_t step = 0;
};

void update_verbalizer_weights(Verbalizer& verbalizer, const ResolvedVerbalizer& resolved,
                               const std::vector<std::vector<double>>& grad_scores,
                               const std::vector<std::vector<double>>& probs,
                               std::vector<WeightAdam>& states, double learning_rate) {
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEpsilon = 1e-8;
  const auto& labels = verbalizer.schema().labels();
  for (std::size_t y = 0; y < labels.size(); ++y) {
    const auto& entries = verbalizer.entries(labels[y]);
    std::vector<double> grad(entries.size(), 0.0);
    for (std::size_t s = 0; s < probs.size(); ++s) {
      double g = grad_scores[s][y];
      for (std::size_t i = 0; i < resolved.label_words[y].size(); ++i) {
        grad[resolved.entry_indices[y][i]] += g * probs[s].at(resolved.label_words[y][i].first);
      }
    }
    auto& state = states[y];
    if (state.m.empty()) {
      state.m.assign(entries.size(), 0.0);
      state.v.assign(entries.size(), 0.0);
    }
    ++state.step;
    double bias1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
    double bias2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));
    std::vector<double> weights(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      state.m[i] = kBeta1 * state.m[i] + (1.0 - kBeta1) * grad[i];
      state.v[i] = kBeta2 * state.v[i] + (1.0 - kBeta2) * grad[i] * grad[i];
      double updated = entries[i].weight -
                       learning_rate * (state.m[i] / bias1) /
                           (std::sqrt(state.v[i] / bias2) + kEpsilon);
      weights[i] = std::max(updated, kWeightFloor);
    }
    verbalizer.set_weights(labels[y], weights);
  }
  verbalizer.normalize_weights();
}

}  // namespace

TrainStats fine_tune(TrainableMlm& mlm, Verbalizer& verbalizer, const PromptTemplate& tmpl,
                     const Dataset& train, const TrainConfig& config, std::uint64_t seed) {
  config.validate();
  verbalizer.validate();
  if (train.size() == 0) throw UsageError("training needs a non-empty dataset");
  if (!(verbalizer.schema() == train.schema())) {
    throw UsageError("verbalizer schema does not match the training dataset schema");
  }

  std::vector<TokenizedPrompt> prompts;
  std::vector<std::size_t> golds;
  prompts.reserve(train.size());
  for (const auto& instance : train.instances()) {
    if (!instance.label) {
      throw DataError("training instance '" + instance.instance_id + "' has no label");
    }
    prompts.push_back(
        tokenize_prompt(mlm, tmpl.render(instance.text), config.max_sequence_length));
    golds.push_back(*train.schema().index_of(*instance.label));
  }

  TrainStats stats;
  if (config.epochs == 0) return stats;

  std::size_t batches_per_epoch = (train.size() + config.batch_size - 1) / config.batch_size;
  std::size_t total_steps = config.epochs * batches_per_epoch;
  bool learn_weights = config.learn_verbalizer_weights && verbalizer.manifest().learnable_weights;
  std::vector<WeightAdam> weight_states(verbalizer.schema().size());
  std::size_t vocab_size = mlm.vocabulary()->size();

  Rng rng(seed ^ kShuffleSalt);
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      std::size_t end = std::min(start + config.batch_size, order.size());
      std::vector<TokenizedPrompt> batch;
      std::vector<std::size_t> batch_gold;
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(prompts[order[i]]);
        batch_gold.push_back(golds[order[i]]);
      }

      // Weights may have moved last step, so re-resolve against the vocab.
      ResolvedVerbalizer resolved = resolve_verbalizer(verbalizer, *mlm.vocabulary());
      auto probs = mlm.forward_train(batch);
      double loss = batch_loss(resolved, probs, batch_gold);
      if (!std::isfinite(loss)) {
        throw ModelError("training diverged: non-finite loss at epoch " +
                         std::to_string(epoch + 1) + ", step " + std::to_string(stats.steps) +
                         ", model state " + mlm.state_hash());
      }
      epoch_loss_sum += loss * static_cast<double>(batch.size());

      double lr = config.learning_rate *
                  (1.0 - static_cast<double>(stats.steps) / static_cast<double>(total_steps));
      mlm.backward_step(batch_grad_probs(resolved, probs, batch_gold, vocab_size), lr);
      if (learn_weights) {
        update_verbalizer_weights(verbalizer, resolved,
                                  batch_grad_scores(resolved, probs, batch_gold), probs,
                                  weight_states, config.verbalizer_learning_rate);
      }
      ++stats.steps;
    }
    stats.epoch_losses.push_back(epoch_loss_sum / static_cast<double>(train.size()));
  }
  return stats;
}

EvalOutcome evaluate(MaskedLanguageModel& mlm, const Verbalizer& verbalizer,
                     const PromptTemplate& tmpl, const Dataset& test,
                     const PriorEstimate* calibration, std::size_t max_sequence_length) {
  if (test.size() == 0) throw DataError("evaluation needs a non-empty test set");
  if (!(verbalizer.schema() == test.schema())) {
    throw UsageError("verbalizer schema does not match the test dataset schema");
  }
  ConfusionMatrix confusion(test.schema());
  for (const auto& instance : test.instances()) {
    if (!instance.label) {
      throw DataError("test instance '" + instance.instance_id + "' has no label");
    }
    Classification c =
        classify(mlm, tmpl, verbalizer, instance.text, calibration, max_sequence_length);
    confusion.add(*instance.label, c.label);
  }
  return {confusion.accuracy(), confusion.macro_f1(), confusion};
}

EvalReport run_experiment(const ExperimentConfig& config, const ModelFactory& factory,
                          const Verbalizer& verbalizer, const Dataset& train,
                          const Dataset& test) {
  config.validate();
  verbalizer.validate();
  PromptTemplate tmpl(config.template_pattern.empty() ? default_template().pattern()
                                                      : config.template_pattern);

  EvalReport report;
  report.schema = verbalizer.schema();
  report.tool_version = kToolVersion;

  std::string mlm_identity;
  for (std::uint64_t seed : config.seeds) {
    MlmPtr model = factory(seed);
    if (!model) throw ModelError("model factory returned no model");
    if (mlm_identity.empty()) mlm_identity = model->identity();

    Verbalizer run_verbalizer = verbalizer;
    std::string pre_hash;
    if (config.regime == Regime::kZeroShot) pre_hash = model->state_hash();

    if (config.regime != Regime::kZeroShot) {
      auto* trainable = dynamic_cast<TrainableMlm*>(model.get());
      if (!trainable || !model->trainable()) {
        throw ModelError("the " + regime_name(config.regime) +
                         " regime needs a trainable model backend");
      }
      Dataset train_used = config.regime == Regime::kFewShot
                               ? sample_few_shot(train, static_cast<int>(config.k_shot), seed)
                               : train;
      if (config.train.learn_verbalizer_weights) {
        run_verbalizer = attach_learnable_weights(run_verbalizer);
      }
      fine_tune(*trainable, run_verbalizer, tmpl, train_used, config.train, seed);
    }

    std::optional<PriorEstimate> priors;
    if (config.effective_calibrate()) {
      priors = estimate_priors(*model, tmpl,
                               support_texts(train, config.refinement.support_size, seed),
                               run_verbalizer.all_words());
    }

    EvalOutcome outcome = evaluate(*model, run_verbalizer, tmpl, test,
                                   priors ? &*priors : nullptr,
                                   config.train.max_sequence_length);
    if (config.regime == Regime::kZeroShot && model->state_hash() != pre_hash) {
      throw ModelError("zero-shot run mutated model parameters");
    }
    report.per_seed.push_back(
        {seed, outcome.accuracy, outcome.macro_f1, std::move(outcome.confusion)});
  }

  double n = static_cast<double>(report.per_seed.size());
  for (const auto& sr : report.per_seed) {
    report.mean_accuracy += sr.accuracy;
    report.mean_macro_f1 += sr.macro_f1;
  }
  report.mean_accuracy /= n;
  report.mean_macro_f1 /= n;
  report.mean_confusion.assign(report.schema.size(),
                               std::vector<double>(report.schema.size(), 0.0));
  for (const auto& sr : report.per_seed) {
    auto rn = sr.confusion.row_normalized();
    for (std::size_t i = 0; i < rn.size(); ++i) {
      for (std::size_t j = 0; j < rn.size(); ++j) report.mean_confusion[i][j] += rn[i][j] / n;
    }
  }

  json snapshot;
  snapshot["regime"] = regime_name(config.regime);
  snapshot["k_shot"] = config.k_shot;
  snapshot["seeds"] = config.seeds;
  snapshot["calibrate"] = config.effective_calibrate();
  snapshot["template"] = tmpl.pattern();
  snapshot["mlm_identity"] = mlm_identity;
  snapshot["verbalizer_hash"] = hash_hex(verbalizer.content_hash());
  snapshot["train_size"] = train.size();
  snapshot["test_size"] = test.size();
  snapshot["max_sequence_length"] = config.train.max_sequence_length;
  snapshot["batch_size"] = config.train.batch_size;
  snapshot["epochs"] = config.train.epochs;
  snapshot["learning_rate"] = config.train.learning_rate;
  snapshot["learn_verbalizer_weights"] = config.train.learn_verbalizer_weights;
  snapshot["verbalizer_learning_rate"] = config.train.verbalizer_learning_rate;
  snapshot["support_size"] = config.refinement.support_size;
  report.config = snapshot;
  return report;
}

}  // namespace citeintent

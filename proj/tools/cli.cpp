// Command-line driver: wires corpus ingestion, verbalizer construction and
// refinement, fine-tuning, evaluation and prediction into one reproducible
// pipeline. Every artifact a command writes embeds the resolved configuration
// and tool version, and is a valid input to the next command.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "citeintent/classify.hpp"
#include "citeintent/corpus.hpp"
#include "citeintent/dataset.hpp"
#include "citeintent/embedding.hpp"
#include "citeintent/errors.hpp"
#include "citeintent/http_mlm.hpp"
#include "citeintent/kpt.hpp"
#include "citeintent/labels.hpp"
#include "citeintent/mlm.hpp"
#include "citeintent/mlm_registry.hpp"
#include "citeintent/prompt_template.hpp"
#include "citeintent/rng.hpp"
#include "citeintent/sections.hpp"
#include "citeintent/train_eval.hpp"
#include "citeintent/verbalizer.hpp"
#include "citeintent/version.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace citeintent;

// Ties a flag to a config-file key: the file supplies the value only when the
// flag was not passed on the command line (flags win).
class ConfigBindings {
 public:
  template <typename T>
  void bind(CLI::Option* opt, const std::string& dotted_key, T& target) {
    bindings_.push_back({opt, pointer_of(dotted_key), [&target](const nlohmann::json& v) {
                           target = v.get<T>();
                         }});
  }

  void bind_custom(CLI::Option* opt, const std::string& dotted_key,
                   std::function<void(const nlohmann::json&)> assign) {
    bindings_.push_back({opt, pointer_of(dotted_key), std::move(assign)});
  }

  void apply(const nlohmann::json& config) const {
    for (const auto& b : bindings_) {
      if (b.opt != nullptr && b.opt->count() > 0) continue;
      nlohmann::json::json_pointer p(b.pointer);
      if (config.contains(p)) b.assign(config.at(p));
    }
  }

 private:
  struct Binding {
    CLI::Option* opt;
    std::string pointer;
    std::function<void(const nlohmann::json&)> assign;
  };

  static std::string pointer_of(const std::string& dotted) {
    std::string out = "/" + dotted;
    for (char& c : out) {
      if (c == '.') c = '/';
    }
    return out;
  }

  std::vector<Binding> bindings_;
};

nlohmann::json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  try {
    nlohmann::json doc;
    in >> doc;
    if (!doc.is_object()) throw DataError("config file " + path + " is not a JSON object");
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed config file " + path + ": " + e.what());
  }
}

PromptTemplate resolve_template(const std::string& pattern) {
  if (pattern.empty()) return default_template();
  return PromptTemplate(pattern);
}

void write_json_file(const json& doc, const std::string& path) {
  if (path.empty()) throw UsageError("an output path is required (--out)");
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << doc.dump(2) << "\n";
}

// Non-blank lines of a text file, or of standard input for path "-".
std::vector<std::string> read_sentences(const std::string& path) {
  std::vector<std::string> lines;
  auto consume = [&lines](std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) lines.push_back(line);
    }
  };
  if (path.empty() || path == "-") {
    consume(std::cin);
  } else {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path);
    consume(in);
  }
  return lines;
}

// Unlabeled support sentences for prior estimation: a seeded sample of the
// given size, in original dataset order.
std::vector<std::string> sample_support(const Dataset& dataset, std::size_t size,
                                        std::uint64_t seed) {
  if (dataset.size() == 0) throw DataError("support dataset is empty");
  std::vector<std::string> texts;
  if (dataset.size() <= size) {
    for (const auto& inst : dataset.instances()) texts.push_back(inst.text);
    return texts;
  }
  Rng rng(seed);
  for (std::size_t i : rng.sample_indices(dataset.size(), size)) {
    texts.push_back(dataset.instances()[i].text);
  }
  return texts;
}

// Options shared by every subcommand; mirrored by top-level config keys.
struct GlobalOptions {
  std::string config_path;
  std::uint64_t seed = 1;
  std::string out;
  std::string mlm_spec = "mock";
  std::string schema_name = "scicite";
  bool json_errors = false;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* mlm_opt = nullptr;
  CLI::Option* schema_opt = nullptr;
};

json scores_json(const std::map<Label, double>& scores, const LabelSchema& schema) {
  json out = json::object();
  for (const Label& label : schema.labels()) out[label.name] = scores.at(label);
  return out;
}

// ---- subcommands ----

struct IngestCommand {
  GlobalOptions* globals = nullptr;
  std::string input;
  std::size_t quota = 100000;
  std::string field_of_study;

  void run() const {
    if (globals->out.empty()) throw UsageError("ingest-corpus needs an output directory (--out)");
    IngestOptions options;
    options.quota = quota;
    if (!field_of_study.empty()) options.field_of_study = field_of_study;

    SectionCorpus corpus = ingest_sections(jsonl_paper_stream(input), options);
    save_corpus(corpus, globals->out);

    json config = {{"command", "ingest-corpus"},
                   {"input", input},
                   {"quota", quota},
                   {"field_of_study", field_of_study.empty() ? json() : json(field_of_study)}};
    write_json_file({{"tool_version", kToolVersion}, {"config", config}},
                    (fs::path(globals->out) / "run_config.json").string());

    for (CanonicalSection s : all_sections()) {
      std::cout << section_name(s) << ": " << corpus.word_count(s) << "/" << corpus.quota()
                << " words\n";
    }
    std::cout << "papers consumed: " << corpus.papers_consumed()
              << ", records skipped: " << corpus.records_skipped() << "\n";
    if (!corpus.all_sections_full()) {
      std::cerr << "warning: the input stream ran out before every section reached its quota\n";
    }
  }
};

struct BuildVerbalizerCommand {
  GlobalOptions* globals = nullptr;
  std::string corpus_dir;
  std::string embedding_path;
  std::size_t expansion_k = 100;
  std::string anchors_path;
  std::string section_map_path;
  bool anchors_only = false;

  void run() const {
    const LabelSchema& schema = builtin_schema(globals->schema_name);
    AnchorSet anchors = anchors_path.empty() ? default_anchors(schema)
                                             : load_anchor_set(anchors_path, schema);

    Verbalizer verbalizer = [&] {
      if (anchors_only) return make_anchor_verbalizer(schema, anchors);
      if (corpus_dir.empty()) throw UsageError("build-verbalizer needs --corpus (or --anchors-only)");
      if (embedding_path.empty()) {
        throw UsageError("build-verbalizer needs --embedding (or --anchors-only)");
      }
      LabelSectionMap section_map = section_map_path.empty()
                                        ? default_section_map(schema)
                                        : load_section_map(section_map_path, schema);
      SectionCorpus corpus = load_corpus(corpus_dir);
      EmbeddingProviderPtr embedder = load_text_embedding(embedding_path);
      return build_verbalizer(schema, anchors, section_map, corpus, *embedder, expansion_k);
    }();

    save_verbalizer(verbalizer, globals->out);
    for (const Label& label : schema.labels()) {
      std::cout << label.name << ": " << verbalizer.entries(label).size() << " words\n";
    }
  }
};

struct RefineCommand {
  GlobalOptions* globals = nullptr;
  std::string verbalizer_path;
  std::string support_path;
  RefinementConfig refinement;
  std::string template_pattern;
  bool learnable_weights = false;
  std::string priors_out;

  void run() const {
    if (globals->out.empty()) throw UsageError("refine-verbalizer needs an output path (--out)");
    Verbalizer verbalizer = load_verbalizer(verbalizer_path);
    MlmPtr mlm = create_mlm(globals->mlm_spec, globals->seed);
    PromptTemplate tmpl = resolve_template(template_pattern);

    Dataset support =
        load_dataset(support_path, verbalizer.schema(), Split::kTrain, /*allow_unlabeled=*/true);
    std::vector<std::string> texts =
        sample_support(support, refinement.support_size, globals->seed);

    PipelineOutcome outcome = refine_pipeline(verbalizer, *mlm, tmpl, texts, refinement);
    if (learnable_weights) outcome.verbalizer = attach_learnable_weights(outcome.verbalizer);
    save_verbalizer(outcome.verbalizer, globals->out);
    if (!priors_out.empty()) save_priors(outcome.priors, priors_out);

    if (outcome.skipped) {
      std::cout << "inputs match the recorded pipeline fingerprint; verbalizer left as-is\n";
    }
    for (const Label& label : outcome.verbalizer.schema().labels()) {
      std::cout << label.name << ": " << outcome.verbalizer.entries(label).size() << " words";
      auto it = outcome.report.dropped.find(label);
      if (it != outcome.report.dropped.end() && !it->second.empty()) {
        std::cout << " (dropped";
        for (const auto& w : it->second) std::cout << " " << w;
        std::cout << ")";
      }
      std::cout << "\n";
    }
    for (const auto& warning : outcome.report.warnings) {
      std::cerr << "warning: " << warning << "\n";
    }
  }
};

struct TrainCommand {
  GlobalOptions* globals = nullptr;
  std::string train_path;
  std::string verbalizer_path;
  TrainConfig train;
  std::string template_pattern;

  void run() const {
    if (globals->out.empty()) throw UsageError("train needs an output directory (--out)");
    const LabelSchema& schema = builtin_schema(globals->schema_name);
    Verbalizer verbalizer = verbalizer_path.empty()
                                ? make_anchor_verbalizer(schema, default_anchors(schema))
                                : load_verbalizer(verbalizer_path);

    MlmPtr mlm = create_mlm(globals->mlm_spec, globals->seed);
    auto* trainable = dynamic_cast<TrainableMlm*>(mlm.get());
    if (trainable == nullptr) {
      throw ModelError("model '" + globals->mlm_spec +
                       "' is not trainable; use toy-new, toy:<checkpoint>, or an http backend");
    }
    if (auto* http = dynamic_cast<HttpMlm*>(trainable)) http->begin_run(globals->seed);

    PromptTemplate tmpl = resolve_template(template_pattern);
    Dataset dataset = load_dataset(train_path, verbalizer.schema(), Split::kTrain);

    TrainStats stats = fine_tune(*trainable, verbalizer, tmpl, dataset, train, globals->seed);
    if (train.epochs == 0) std::cerr << "warning: --epochs 0, model unchanged\n";

    fs::create_directories(globals->out);
    trainable->save_checkpoint((fs::path(globals->out) / "checkpoint.json").string());
    save_verbalizer(verbalizer, (fs::path(globals->out) / "verbalizer.json").string());

    json config = {{"command", "train"},
                   {"train", train_path},
                   {"verbalizer", verbalizer_path},
                   {"mlm", globals->mlm_spec},
                   {"schema", verbalizer.schema().name()},
                   {"seed", globals->seed},
                   {"template", tmpl.pattern()},
                   {"max_sequence_length", train.max_sequence_length},
                   {"batch_size", train.batch_size},
                   {"epochs", train.epochs},
                   {"learning_rate", train.learning_rate},
                   {"learn_verbalizer_weights", train.learn_verbalizer_weights},
                   {"verbalizer_learning_rate", train.verbalizer_learning_rate}};
    json stats_doc = {{"tool_version", kToolVersion},
                      {"config", config},
                      {"steps", stats.steps},
                      {"epoch_losses", stats.epoch_losses},
                      {"model_state", mlm->state_hash()}};
    write_json_file(stats_doc, (fs::path(globals->out) / "train_stats.json").string());

    for (std::size_t e = 0; e < stats.epoch_losses.size(); ++e) {
      std::cout << "epoch " << (e + 1) << ": loss " << stats.epoch_losses[e] << "\n";
    }
    std::cout << "wrote " << globals->out << "/checkpoint.json (" << stats.steps << " steps)\n";
  }
};

struct EvaluateCommand {
  GlobalOptions* globals = nullptr;
  std::string train_path;
  std::string test_path;
  std::string verbalizer_path;
  std::string regime_name_ = "supervised";
  std::size_t k_shot = 0;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  TrainConfig train;
  RefinementConfig refinement;
  std::string template_pattern;
  bool calibrate_flag = false;
  std::optional<bool> config_calibrate;
  CLI::Option* calibrate_opt = nullptr;

  void run() const {
    if (globals->out.empty()) throw UsageError("evaluate needs a report path (--out)");
    const LabelSchema& schema = builtin_schema(globals->schema_name);
    Verbalizer verbalizer = verbalizer_path.empty()
                                ? make_anchor_verbalizer(schema, default_anchors(schema))
                                : load_verbalizer(verbalizer_path);

    ExperimentConfig config;
    config.regime = parse_regime(regime_name_);
    config.k_shot = k_shot;
    config.seeds = seeds;
    config.train = train;
    config.refinement = refinement;
    config.template_pattern = template_pattern;
    if (calibrate_opt != nullptr && calibrate_opt->count() > 0) {
      config.calibrate = calibrate_flag;
    } else if (config_calibrate) {
      config.calibrate = *config_calibrate;
    }

    Dataset train_set = train_path.empty()
                            ? Dataset(verbalizer.schema(), Split::kTrain, {})
                            : load_dataset(train_path, verbalizer.schema(), Split::kTrain);
    Dataset test_set = load_dataset(test_path, verbalizer.schema(), Split::kTest);

    const bool reinit_per_seed = config.regime != Regime::kZeroShot;
    ModelFactory factory = [this, reinit_per_seed](std::uint64_t seed) {
      MlmPtr mlm = create_mlm(globals->mlm_spec, seed);
      if (reinit_per_seed) {
        if (auto* http = dynamic_cast<HttpMlm*>(mlm.get())) http->begin_run(seed);
      }
      return mlm;
    };

    EvalReport report = run_experiment(config, factory, verbalizer, train_set, test_set);
    report.config["source"] = {{"train", train_path},
                               {"test", test_path},
                               {"verbalizer", verbalizer_path},
                               {"mlm", globals->mlm_spec},
                               {"schema", verbalizer.schema().name()}};
    save_report(report, globals->out);
    std::cout << report.to_text_table();
    std::cout << "wrote " << globals->out << "\n";
  }
};

struct PredictCommand {
  GlobalOptions* globals = nullptr;
  std::string input = "-";
  std::string verbalizer_path;
  std::string priors_path;
  std::string template_pattern;

  void run() const {
    if (verbalizer_path.empty()) throw UsageError("predict needs a verbalizer (--verbalizer)");
    Verbalizer verbalizer = load_verbalizer(verbalizer_path);
    MlmPtr mlm = create_mlm(globals->mlm_spec, globals->seed);
    PromptTemplate tmpl = resolve_template(template_pattern);

    std::optional<PriorEstimate> priors;
    if (!priors_path.empty()) priors = load_priors(priors_path);

    std::vector<std::string> sentences = read_sentences(input);
    json predictions = json::array();
    for (const std::string& sentence : sentences) {
      Classification result =
          classify(*mlm, tmpl, verbalizer, sentence, priors ? &*priors : nullptr);
      json line = {{"label", result.label.name},
                   {"scores", scores_json(result.scores, verbalizer.schema())}};
      std::cout << line.dump() << "\n";
      line["text"] = sentence;
      predictions.push_back(std::move(line));
    }

    if (!globals->out.empty()) {
      json config = {{"command", "predict"},
                     {"verbalizer", verbalizer_path},
                     {"mlm", globals->mlm_spec},
                     {"template", tmpl.pattern()},
                     {"priors", priors_path},
                     {"calibrated", !priors_path.empty()}};
      write_json_file({{"tool_version", kToolVersion},
                       {"config", config},
                       {"predictions", predictions}},
                      globals->out);
    }
  }
};

struct ReportCommand {
  GlobalOptions* globals = nullptr;
  std::string report_path;

  void run() const {
    EvalReport report = load_report(report_path);
    std::cout << report.to_text_table();
    if (!globals->out.empty()) {
      std::ofstream out(globals->out);
      if (!out) throw DataError("cannot write " + globals->out);
      out << report.to_csv();
      std::cout << "wrote " << globals->out << "\n";
    }
  }
};

void emit_error(bool json_errors, const std::string& kind, const std::string& message) {
  if (json_errors) {
    json doc = {{"error", {{"kind", kind}, {"message", message}}}};
    std::cerr << doc.dump() << "\n";
  } else {
    std::cerr << "error: " << message << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  // Scanned directly so even argument-parsing failures honor the flag.
  bool json_errors = false;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--json-errors") json_errors = true;
  }

  GlobalOptions globals;
  globals.json_errors = json_errors;

  CLI::App app{"Prompt-based citation intent classification pipeline"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));

  app.add_option("--config", globals.config_path, "JSON config file; explicit flags override it");
  globals.seed_opt = app.add_option("--seed", globals.seed, "seed for single-run commands");
  app.add_option("--out", globals.out, "output file or directory");
  globals.mlm_opt = app.add_option(
      "--mlm", globals.mlm_spec,
      "model backend: mock[:vocab], toy:<ckpt>, toy-new[:vocab], or an http URL");
  globals.schema_opt = app.add_option("--schema", globals.schema_name,
                                      "label schema name (acl-arc or scicite)");
  app.add_flag("--json-errors", globals.json_errors,
               "report failures as machine-readable JSON on stderr");

  ConfigBindings bindings;
  bindings.bind(globals.seed_opt, "seed", globals.seed);
  bindings.bind(globals.mlm_opt, "mlm", globals.mlm_spec);
  bindings.bind(globals.schema_opt, "schema", globals.schema_name);

  std::map<const CLI::App*, std::function<void()>> actions;

  IngestCommand ingest;
  ingest.globals = &globals;
  {
    CLI::App* cmd = app.add_subcommand("ingest-corpus",
                                       "Build per-section word corpora from parsed papers");
    auto* input = cmd->add_option("--input", ingest.input, "line-delimited JSON of parsed papers")
                      ->required();
    auto* quota = cmd->add_option("--quota", ingest.quota, "words per section");
    auto* fos = cmd->add_option("--field-of-study", ingest.field_of_study,
                                "keep only papers from this field");
    bindings.bind(input, "input", ingest.input);
    bindings.bind(quota, "quota", ingest.quota);
    bindings.bind(fos, "field_of_study", ingest.field_of_study);
    actions[cmd] = [&ingest] { ingest.run(); };
  }

  BuildVerbalizerCommand build;
  build.globals = &globals;
  {
    CLI::App* cmd = app.add_subcommand("build-verbalizer",
                                       "Expand label anchors into label-word sets");
    auto* corpus = cmd->add_option("--corpus", build.corpus_dir, "corpus archive directory");
    auto* embedding = cmd->add_option("--embedding", build.embedding_path,
                                      "word-vector file (word v1 v2 ... per line)");
    auto* k = cmd->add_option("-k,--expansion-k", build.expansion_k,
                              "neighbors per anchor and section");
    auto* anchors = cmd->add_option("--anchors", build.anchors_path,
                                    "anchor file overriding the shipped table");
    auto* section_map = cmd->add_option("--section-map", build.section_map_path,
                                        "label-to-section map overriding the shipped table");
    cmd->add_flag("--anchors-only", build.anchors_only,
                  "skip expansion; emit the anchors as the whole verbalizer");
    bindings.bind(corpus, "corpus", build.corpus_dir);
    bindings.bind(embedding, "embedding", build.embedding_path);
    bindings.bind(k, "expansion_k", build.expansion_k);
    bindings.bind(anchors, "anchors", build.anchors_path);
    bindings.bind(section_map, "section_map", build.section_map_path);
    actions[cmd] = [&build] { build.run(); };
  }

  RefineCommand refine;
  refine.globals = &globals;
  {
    CLI::App* cmd = app.add_subcommand("refine-verbalizer",
                                       "Denoise a verbalizer against a model and support set");
    auto* verbalizer = cmd->add_option("--verbalizer", refine.verbalizer_path, "verbalizer file")
                           ->required();
    auto* support = cmd->add_option("--support", refine.support_path,
                                    "dataset supplying unlabeled support sentences")
                        ->required();
    auto* quantile = cmd->add_option("--frequency-quantile", refine.refinement.frequency_quantile,
                                     "per-label prior quantile below which words drop");
    auto* threshold = cmd->add_option("--relevance-threshold",
                                      refine.refinement.relevance_threshold,
                                      "relevance ratio below which words drop");
    auto* min_words = cmd->add_option("--min-words", refine.refinement.min_words_per_label,
                                      "words each label keeps at minimum");
    auto* support_size = cmd->add_option("--support-size", refine.refinement.support_size,
                                         "support sentences to sample");
    auto* tmpl = cmd->add_option("--template", refine.template_pattern,
                                 "prompt pattern with [X] and [MASK]");
    cmd->add_flag("--learnable-weights", refine.learnable_weights,
                  "re-initialize weights as trainable");
    auto* priors_out = cmd->add_option("--priors-out", refine.priors_out,
                                       "also write the estimated priors");
    bindings.bind(verbalizer, "verbalizer", refine.verbalizer_path);
    bindings.bind(support, "support", refine.support_path);
    bindings.bind(quantile, "refinement.frequency_quantile",
                  refine.refinement.frequency_quantile);
    bindings.bind(threshold, "refinement.relevance_threshold",
                  refine.refinement.relevance_threshold);
    bindings.bind(min_words, "refinement.min_words_per_label",
                  refine.refinement.min_words_per_label);
    bindings.bind(support_size, "refinement.support_size", refine.refinement.support_size);
    bindings.bind(tmpl, "template", refine.template_pattern);
    bindings.bind(priors_out, "priors_out", refine.priors_out);
    actions[cmd] = [&refine] { refine.run(); };
  }

  TrainCommand train;
  train.globals = &globals;
  {
    CLI::App* cmd = app.add_subcommand("train", "Fine-tune a trainable backend on one seed");
    auto* train_path = cmd->add_option("--train", train.train_path, "labeled train dataset")
                           ->required();
    auto* verbalizer = cmd->add_option("--verbalizer", train.verbalizer_path,
                                       "verbalizer file (default: shipped anchors)");
    auto* max_len = cmd->add_option("--max-seq-len", train.train.max_sequence_length,
                                    "token budget per prompt");
    auto* batch = cmd->add_option("--batch-size", train.train.batch_size, "instances per step");
    auto* epochs = cmd->add_option("--epochs", train.train.epochs, "passes over the train set");
    auto* lr = cmd->add_option("--lr", train.train.learning_rate,
                               "peak learning rate (linear decay to zero)");
    auto* learn_weights = cmd->add_flag("--learn-verbalizer-weights,!--freeze-verbalizer-weights",
                                        train.train.learn_verbalizer_weights,
                                        "train per-word weights when the verbalizer allows it");
    auto* vb_lr = cmd->add_option("--verbalizer-lr", train.train.verbalizer_learning_rate,
                                  "learning rate for verbalizer weights");
    auto* tmpl = cmd->add_option("--template", train.template_pattern,
                                 "prompt pattern with [X] and [MASK]");
    bindings.bind(train_path, "train_path", train.train_path);
    bindings.bind(verbalizer, "verbalizer", train.verbalizer_path);
    bindings.bind(max_len, "train.max_sequence_length", train.train.max_sequence_length);
    bindings.bind(batch, "train.batch_size", train.train.batch_size);
    bindings.bind(epochs, "train.epochs", train.train.epochs);
    bindings.bind(lr, "train.learning_rate", train.train.learning_rate);
    bindings.bind(learn_weights, "train.learn_verbalizer_weights",
                  train.train.learn_verbalizer_weights);
    bindings.bind(vb_lr, "train.verbalizer_learning_rate",
                  train.train.verbalizer_learning_rate);
    bindings.bind(tmpl, "template", train.template_pattern);
    actions[cmd] = [&train] { train.run(); };
  }

  EvaluateCommand evaluate;
  evaluate.globals = &globals;
  {
    CLI::App* cmd = app.add_subcommand("evaluate", "Run a seed-averaged experiment");
    auto* train_path = cmd->add_option("--train", evaluate.train_path,
                                       "labeled train dataset (omit for uncalibrated zero-shot)");
    auto* test_path = cmd->add_option("--test", evaluate.test_path, "labeled test dataset")
                          ->required();
    auto* verbalizer = cmd->add_option("--verbalizer", evaluate.verbalizer_path,
                                       "verbalizer file (default: shipped anchors)");
    auto* regime = cmd->add_option("--regime", evaluate.regime_name_,
                                   "supervised, few-shot, or zero-shot");
    auto* k_shot = cmd->add_option("--k-shot", evaluate.k_shot,
                                   "labeled instances per class (few-shot)");
    auto* seeds = cmd->add_option("--seeds", evaluate.seeds, "seeds to average over")
                      ->delimiter(',');
    auto* max_len = cmd->add_option("--max-seq-len", evaluate.train.max_sequence_length,
                                    "token budget per prompt");
    auto* batch = cmd->add_option("--batch-size", evaluate.train.batch_size,
                                  "instances per step");
    auto* epochs = cmd->add_option("--epochs", evaluate.train.epochs,
                                   "passes over the train set");
    auto* lr = cmd->add_option("--lr", evaluate.train.learning_rate,
                               "peak learning rate (linear decay to zero)");
    auto* learn_weights =
        cmd->add_flag("--learn-verbalizer-weights,!--freeze-verbalizer-weights",
                      evaluate.train.learn_verbalizer_weights,
                      "train per-word weights when the verbalizer allows it");
    auto* vb_lr = cmd->add_option("--verbalizer-lr", evaluate.train.verbalizer_learning_rate,
                                  "learning rate for verbalizer weights");
    auto* support_size = cmd->add_option("--support-size", evaluate.refinement.support_size,
                                         "support sentences for calibration priors");
    auto* tmpl = cmd->add_option("--template", evaluate.template_pattern,
                                 "prompt pattern with [X] and [MASK]");
    evaluate.calibrate_opt =
        cmd->add_flag("--calibrate,!--no-calibrate", evaluate.calibrate_flag,
                      "calibrate mask distributions against contextualized priors "
                      "(default: off supervised, on otherwise)");
    bindings.bind(train_path, "train_path", evaluate.train_path);
    bindings.bind(test_path, "test_path", evaluate.test_path);
    bindings.bind(verbalizer, "verbalizer", evaluate.verbalizer_path);
    bindings.bind(regime, "regime", evaluate.regime_name_);
    bindings.bind(k_shot, "k_shot", evaluate.k_shot);
    bindings.bind(seeds, "seeds", evaluate.seeds);
    bindings.bind(max_len, "train.max_sequence_length", evaluate.train.max_sequence_length);
    bindings.bind(batch, "train.batch_size", evaluate.train.batch_size);
    bindings.bind(epochs, "train.epochs", evaluate.train.epochs);
    bindings.bind(lr, "train.learning_rate", evaluate.train.learning_rate);
    bindings.bind(learn_weights, "train.learn_verbalizer_weights",
                  evaluate.train.learn_verbalizer_weights);
    bindings.bind(vb_lr, "train.verbalizer_learning_rate",
                  evaluate.train.verbalizer_learning_rate);
    bindings.bind(support_size, "refinement.support_size", evaluate.refinement.support_size);
    bindings.bind(tmpl, "template", evaluate.template_pattern);
    bindings.bind_custom(evaluate.calibrate_opt, "calibrate", [&evaluate](const nlohmann::json& v) {
      evaluate.config_calibrate = v.get<bool>();
    });
    actions[cmd] = [&evaluate] { evaluate.run(); };
  }

  PredictCommand predict;
  predict.globals = &globals;
  {
    CLI::App* cmd = app.add_subcommand("predict", "Classify citation sentences");
    auto* input = cmd->add_option("--input", predict.input,
                                  "sentence-per-line file, or - for standard input");
    auto* verbalizer = cmd->add_option("--verbalizer", predict.verbalizer_path, "verbalizer file");
    auto* priors = cmd->add_option("--priors", predict.priors_path,
                                   "prior file; calibrates the mask distribution when given");
    auto* tmpl = cmd->add_option("--template", predict.template_pattern,
                                 "prompt pattern with [X] and [MASK]");
    bindings.bind(input, "input", predict.input);
    bindings.bind(verbalizer, "verbalizer", predict.verbalizer_path);
    bindings.bind(priors, "priors", predict.priors_path);
    bindings.bind(tmpl, "template", predict.template_pattern);
    actions[cmd] = [&predict] { predict.run(); };
  }

  ReportCommand report;
  report.globals = &globals;
  {
    CLI::App* cmd = app.add_subcommand("report", "Render a saved report as text (and CSV)");
    auto* path = cmd->add_option("--report", report.report_path, "report file from evaluate")
                     ->required();
    bindings.bind(path, "report", report.report_path);
    actions[cmd] = [&report] { report.run(); };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    if (json_errors) {
      emit_error(true, "usage", e.what());
      return kExitUsage;
    }
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (!globals.config_path.empty()) bindings.apply(load_config_file(globals.config_path));
    for (CLI::App* sub : app.get_subcommands()) {
      auto it = actions.find(sub);
      if (it != actions.end()) it->second();
    }
    return kExitOk;
  } catch (const UsageError& e) {
    emit_error(globals.json_errors, "usage", e.what());
    return kExitUsage;
  } catch (const DataError& e) {
    emit_error(globals.json_errors, "data", e.what());
    return kExitData;
  } catch (const ModelError& e) {
    emit_error(globals.json_errors, "model", e.what());
    return kExitModel;
  } catch (const std::exception& e) {
    emit_error(globals.json_errors, "internal", e.what());
    return 1;
  }
}

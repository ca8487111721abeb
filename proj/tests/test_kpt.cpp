#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "citeintent/errors.hpp"
#include "citeintent/kpt.hpp"
#include "citeintent/mock_mlm.hpp"
#include "citeintent/verbalizer.hpp"
#include "test_util.hpp"

using namespace citeintent;
using testutil::TempDir;

namespace {

std::shared_ptr<Vocabulary> builtin_vocab() {
  static auto vocab = std::make_shared<Vocabulary>(builtin_vocabulary_words());
  return vocab;
}

// bg: one anchor plus two minable words ("qqq" resolves to nothing and so
// always carries prior zero); mth: one anchor plus one minable word.
Verbalizer pipeline_verbalizer() {
  LabelSchema schema("pipe", {{"bg"}, {"mth"}});
  std::map<Label, std::vector<LabelWordEntry>> entries;
  entries[Label{"bg"}] = {{"background", 0.25, "background", std::nullopt},
                          {"prior", 0.25, "background", CanonicalSection::kIntroduction},
                          {"data", 0.25, "background", CanonicalSection::kIntroduction},
                          {"qqq", 0.25, "background", CanonicalSection::kIntroduction}};
  entries[Label{"mth"}] = {{"method", 0.5, "method", std::nullopt},
                           {"procedure", 0.5, "method", CanonicalSection::kMethodology}};
  return Verbalizer(schema, std::move(entries), VerbalizerManifest{});
}

Verbalizer relevance_verbalizer() {
  LabelSchema schema("rel", {{"bg"}, {"mth"}});
  std::map<Label, std::vector<LabelWordEntry>> entries;
  entries[Label{"bg"}] = {{"background", 1.0 / 3, "background", std::nullopt},
                          {"prior", 1.0 / 3, "background", CanonicalSection::kIntroduction},
                          {"data", 1.0 / 3, "background", CanonicalSection::kIntroduction}};
  entries[Label{"mth"}] = {{"method", 0.5, "method", std::nullopt},
                           {"procedure", 0.5, "method", CanonicalSection::kMethodology}};
  return Verbalizer(schema, std::move(entries), VerbalizerManifest{});
}

// Five-word single-label verbalizer for the frequency-cut hand cases.
Verbalizer frequency_verbalizer() {
  LabelSchema schema("freq", {{"a"}});
  std::map<Label, std::vector<LabelWordEntry>> entries;
  entries[Label{"a"}] = {{"anchor_a", 0.2, "anchor_a", std::nullopt},
                         {"w1", 0.2, "anchor_a", CanonicalSection::kIntroduction},
                         {"w2", 0.2, "anchor_a", CanonicalSection::kIntroduction},
                         {"w3", 0.2, "anchor_a", CanonicalSection::kIntroduction},
                         {"w4", 0.2, "anchor_a", CanonicalSection::kIntroduction}};
  return Verbalizer(schema, std::move(entries), VerbalizerManifest{});
}

PriorEstimate priors_of(std::map<std::string, double> table, std::size_t support = 1) {
  PriorEstimate p;
  p.word_prior = std::move(table);
  p.support_size = support;
  return p;
}

}  // namespace

TEST_CASE("quantile interpolates linearly between order statistics") {
  std::vector<double> vals{1.0, 2.0, 3.0, 4.0};
  CHECK(quantile(vals, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(quantile(vals, 0.25) == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(quantile(vals, 0.5) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(quantile(vals, 1.0) == doctest::Approx(4.0).epsilon(1e-15));

  // input order does not matter
  CHECK(quantile({3.0, 1.0, 4.0, 2.0}, 0.5) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(quantile({0.4, 0.3, 0.01, 0.005}, 0.25) == doctest::Approx(0.00875).epsilon(1e-12));
  CHECK(quantile({7.0}, 0.3) == doctest::Approx(7.0).epsilon(1e-15));

  CHECK_THROWS_AS(quantile({}, 0.5), UsageError);
  CHECK_THROWS_AS(quantile({1.0}, 1.5), UsageError);
  CHECK_THROWS_AS(quantile({1.0}, -0.1), UsageError);
}

TEST_CASE("refinement config validation") {
  RefinementConfig good;
  CHECK_NOTHROW(good.validate());

  RefinementConfig bad = good;
  bad.frequency_quantile = 1.0;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad.frequency_quantile = -0.01;
  CHECK_THROWS_AS(bad.validate(), UsageError);

  bad = good;
  bad.relevance_threshold = -1.0;
  CHECK_THROWS_AS(bad.validate(), UsageError);
  bad.relevance_threshold = std::nan("");
  CHECK_THROWS_AS(bad.validate(), UsageError);

  bad = good;
  bad.min_words_per_label = 0;
  CHECK_THROWS_AS(bad.validate(), UsageError);

  bad = good;
  bad.support_size = 0;
  CHECK_THROWS_AS(bad.validate(), UsageError);
}

TEST_CASE("estimate_priors averages mask probabilities over the support set") {
  MockMlm mlm(builtin_vocab());
  const PromptTemplate& tmpl = default_template();

  // "background background": 2 citation + 6 glue = 8 real tokens, so each
  // probability is (0.1 + count) / (0.1 * 87 + 8); "prior": 7 real tokens.
  auto priors = estimate_priors(mlm, tmpl, {"background background", "prior"},
                                {"background", "prior", "qqq"});
  CHECK(priors.support_size == 2);
  double t1 = 0.1 * 87 + 8;
  double t2 = 0.1 * 87 + 7;
  CHECK(priors.prior_of("background") ==
        doctest::Approx((2.1 / t1 + 0.1 / t2) / 2).epsilon(1e-12));
  CHECK(priors.prior_of("prior") == doctest::Approx((0.1 / t1 + 1.1 / t2) / 2).epsilon(1e-12));
  CHECK(priors.prior_of("qqq") == 0.0);      // resolves to nothing
  CHECK(priors.prior_of("unseen") == 0.0);   // untracked

  CHECK_THROWS_AS(estimate_priors(mlm, tmpl, {}, {"background"}), UsageError);
  CHECK_THROWS_AS(estimate_priors(mlm, tmpl, {"background"}, {}), UsageError);
}

TEST_CASE("frequency refinement cuts below the per-label prior quantile") {
  Verbalizer v = frequency_verbalizer();
  auto priors =
      priors_of({{"anchor_a", 0.5}, {"w1", 0.4}, {"w2", 0.3}, {"w3", 0.02}, {"w4", 0.01}});

  RefinementConfig config;
  config.frequency_quantile = 0.25;  // threshold = 0.02 exactly; w4 alone falls strictly below
  config.min_words_per_label = 3;

  RefinementReport report;
  Verbalizer refined = frequency_refine(v, priors, config, &report);
  CHECK(refined.words(Label{"a"}) == std::vector<std::string>{"anchor_a", "w1", "w2", "w3"});
  for (const auto& e : refined.entries(Label{"a"})) {
    CHECK(e.weight == doctest::Approx(0.25).epsilon(1e-12));
  }
  CHECK(report.dropped.at(Label{"a"}) == std::vector<std::string>{"w4"});
  CHECK(report.warnings.empty());
  REQUIRE(refined.manifest().refinements.size() == 1);
  CHECK(refined.manifest().refinements[0] == "frequency(quantile=0.25)");
}

TEST_CASE("frequency refinement keeps at least min_words_per_label") {
  Verbalizer v = frequency_verbalizer();
  auto priors =
      priors_of({{"anchor_a", 0.5}, {"w1", 0.4}, {"w2", 0.3}, {"w3", 0.02}, {"w4", 0.01}});
  RefinementConfig config;
  config.frequency_quantile = 0.25;
  config.min_words_per_label = 5;

  RefinementReport report;
  Verbalizer refined = frequency_refine(v, priors, config, &report);
  CHECK(refined.words(Label{"a"}).size() == 5);
  CHECK(report.dropped.at(Label{"a"}).empty());
}

TEST_CASE("frequency refinement never drops anchors") {
  Verbalizer v = frequency_verbalizer();
  // the anchor has the lowest prior of all, below the median threshold
  auto priors =
      priors_of({{"anchor_a", 0.001}, {"w1", 0.4}, {"w2", 0.3}, {"w3", 0.02}, {"w4", 0.01}});
  RefinementConfig config;
  config.frequency_quantile = 0.5;  // threshold 0.02; anchor and w4 fall below it
  config.min_words_per_label = 1;

  RefinementReport report;
  Verbalizer refined = frequency_refine(v, priors, config, &report);
  auto words = refined.words(Label{"a"});
  CHECK(std::find(words.begin(), words.end(), "anchor_a") != words.end());
  CHECK(report.dropped.at(Label{"a"}) == std::vector<std::string>{"w4"});
}

TEST_CASE("frequency refinement breaks prior ties toward the later word") {
  Verbalizer v = frequency_verbalizer();
  auto priors =
      priors_of({{"anchor_a", 0.5}, {"w1", 0.4}, {"w2", 0.3}, {"w3", 0.01}, {"w4", 0.01}});
  RefinementConfig config;
  config.frequency_quantile = 0.45;  // threshold 0.242: both w3 and w4 qualify
  config.min_words_per_label = 4;    // but only one drop is allowed

  RefinementReport report;
  Verbalizer refined = frequency_refine(v, priors, config, &report);
  CHECK(refined.words(Label{"a"}) == std::vector<std::string>{"anchor_a", "w1", "w2", "w3"});
  CHECK(report.dropped.at(Label{"a"}) == std::vector<std::string>{"w4"});
}

TEST_CASE("relevance refinement drops words no likelier under their own label") {
  MockMlm mlm(builtin_vocab());
  const PromptTemplate& tmpl = default_template();
  Verbalizer v = relevance_verbalizer();

  std::vector<std::string> support{"background prior background", "method procedure method",
                                   "background prior background", "method procedure method"};
  RefinementConfig config;
  config.relevance_threshold = 1.2;
  config.min_words_per_label = 1;

  RefinementReport report;
  Verbalizer refined = relevance_refine(v, mlm, tmpl, support, config, &report);

  // "data" never occurs in any support prompt, so its mean probability under
  // bg-predicted prompts equals its global mean: relevance exactly 1 < 1.2.
  // "prior" reaches 1.1/0.6 = 1.83, "background" 2.1/1.1 = 1.91 — both stay.
  CHECK(refined.words(Label{"bg"}) == std::vector<std::string>{"background", "prior"});
  for (const auto& e : refined.entries(Label{"bg"})) {
    CHECK(e.weight == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK(refined.words(Label{"mth"}) == std::vector<std::string>{"method", "procedure"});
  CHECK(report.dropped.at(Label{"bg"}) == std::vector<std::string>{"data"});
  CHECK(report.dropped.at(Label{"mth"}).empty());
  CHECK(report.warnings.empty());
  REQUIRE(refined.manifest().refinements.size() == 1);
  CHECK(refined.manifest().refinements[0] == "relevance(threshold=1.2)");

  CHECK_THROWS_AS(relevance_refine(v, mlm, tmpl, {}, config, nullptr), UsageError);
}

TEST_CASE("relevance refinement warns about labels without support predictions") {
  MockMlm mlm(builtin_vocab());
  const PromptTemplate& tmpl = default_template();
  Verbalizer v = relevance_verbalizer();

  // every support prompt predicts bg; threshold zero disables removals
  std::vector<std::string> support{"background prior background", "background prior background"};
  RefinementConfig config;
  config.relevance_threshold = 0.0;
  config.min_words_per_label = 1;

  RefinementReport report;
  Verbalizer refined = relevance_refine(v, mlm, tmpl, support, config, &report);
  REQUIRE(report.warnings.size() == 1);
  CHECK(report.warnings[0] ==
        "no support prompt was predicted as 'mth'; relevance refinement skipped for it");

  const auto& before = v.entries(Label{"mth"});
  const auto& after = refined.entries(Label{"mth"});
  REQUIRE(after.size() == before.size());
  for (std::size_t i = 0; i < after.size(); ++i) {
    CHECK(after[i].word == before[i].word);
    CHECK(after[i].weight == before[i].weight);
  }
}

TEST_CASE("calibration divides by priors and renormalizes over the tracked set") {
  auto vocab = std::make_shared<Vocabulary>(std::vector<std::string>{"a", "b", "c"});
  MaskDistribution dist;
  dist.vocab = vocab;
  dist.probs = {0.2, 0.2, 0.6};

  // ratios 0.2/0.1 = 2 and 0.2/0.4 = 0.5; normalized [0.8, 0.2]; "c" is
  // untracked and drops to zero
  auto out = calibrate(dist, priors_of({{"a", 0.1}, {"b", 0.4}}));
  CHECK(out.probs == std::vector<double>{0.8, 0.2, 0.0});
  CHECK(out.vocab == vocab);

  // uniform priors just restrict and rescale the distribution
  auto uniform = calibrate(dist, priors_of({{"a", 0.25}, {"b", 0.25}}));
  CHECK(uniform.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(uniform.probs[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(uniform.probs[2] == 0.0);
}

TEST_CASE("calibration failure modes") {
  auto vocab = std::make_shared<Vocabulary>(std::vector<std::string>{"a", "b", "c"});
  MaskDistribution dist;
  dist.vocab = vocab;
  dist.probs = {0.0, 0.0, 1.0};

  CHECK_THROWS_AS(calibrate(dist, priors_of({{"a", 0.1}, {"b", 0.1}})), ModelError);
  CHECK_THROWS_AS(calibrate(dist, priors_of({{"zzz", 0.5}})), ModelError);
  CHECK_THROWS_AS(calibrate(dist, priors_of({})), UsageError);

  MaskDistribution no_vocab;
  no_vocab.probs = {1.0};
  CHECK_THROWS_AS(calibrate(no_vocab, priors_of({{"a", 0.1}})), ModelError);

  CHECK_THROWS_AS(calibrate(dist, priors_of({{"a", 1.5}})), ModelError);  // prior outside [0,1]
}

TEST_CASE("attach_learnable_weights resets to uniform and is idempotent") {
  LabelSchema schema("lw", {{"x"}});
  std::map<Label, std::vector<LabelWordEntry>> entries;
  entries[Label{"x"}] = {{"alpha", 0.7, "alpha", std::nullopt},
                         {"beta", 0.3, "alpha", CanonicalSection::kIntroduction}};
  Verbalizer v(schema, std::move(entries), VerbalizerManifest{});

  Verbalizer learnable = attach_learnable_weights(v);
  CHECK(learnable.manifest().learnable_weights);
  CHECK(learnable.entries(Label{"x"})[0].weight == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(learnable.entries(Label{"x"})[1].weight == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(learnable.manifest().refinements.size() == 1);
  CHECK(learnable.manifest().refinements[0] == "learnable_weights");

  Verbalizer again = attach_learnable_weights(learnable);
  CHECK(again.manifest().refinements == learnable.manifest().refinements);
  CHECK(again.content_hash() == learnable.content_hash());
}

TEST_CASE("refine_pipeline runs frequency then relevance and records a fingerprint") {
  MockMlm mlm(builtin_vocab());
  const PromptTemplate& tmpl = default_template();
  Verbalizer v = pipeline_verbalizer();

  std::vector<std::string> support{"background prior background", "method procedure method"};
  RefinementConfig config;
  config.frequency_quantile = 0.25;
  config.relevance_threshold = 1.2;
  config.min_words_per_label = 2;
  config.support_size = support.size();

  PipelineOutcome out = refine_pipeline(v, mlm, tmpl, support, config);
  CHECK_FALSE(out.skipped);

  // frequency cut removes "qqq" (prior 0), relevance then removes "data"
  // (relevance exactly 1); the mth pair survives both via the size floor
  CHECK(out.verbalizer.words(Label{"bg"}) == std::vector<std::string>{"background", "prior"});
  CHECK(out.verbalizer.words(Label{"mth"}) == std::vector<std::string>{"method", "procedure"});
  CHECK(out.report.dropped.at(Label{"bg"}) == std::vector<std::string>{"qqq", "data"});
  CHECK(out.report.warnings.empty());
  CHECK(out.verbalizer.manifest().refinements ==
        std::vector<std::string>{"frequency(quantile=0.25)", "relevance(threshold=1.2)"});
  CHECK_FALSE(out.verbalizer.manifest().pipeline_fingerprint.empty());

  // reported priors cover exactly the surviving words
  CHECK(out.priors.support_size == 2);
  std::vector<std::string> tracked;
  for (const auto& [word, p] : out.priors.word_prior) tracked.push_back(word);
  CHECK(tracked == std::vector<std::string>{"background", "method", "prior", "procedure"});
  double t = 0.1 * 87 + 9;  // both support prompts carry nine real tokens
  CHECK(out.priors.prior_of("background") == doctest::Approx((2.1 + 0.1) / (2 * t)).epsilon(1e-12));
  CHECK(out.priors.prior_of("prior") == doctest::Approx((1.1 + 0.1) / (2 * t)).epsilon(1e-12));
}

TEST_CASE("refine_pipeline skips when the fingerprint matches") {
  MockMlm mlm(builtin_vocab());
  const PromptTemplate& tmpl = default_template();
  Verbalizer v = pipeline_verbalizer();

  std::vector<std::string> support{"background prior background", "method procedure method"};
  RefinementConfig config;
  config.frequency_quantile = 0.25;
  config.relevance_threshold = 1.2;
  config.min_words_per_label = 2;
  config.support_size = support.size();

  PipelineOutcome first = refine_pipeline(v, mlm, tmpl, support, config);
  PipelineOutcome second = refine_pipeline(first.verbalizer, mlm, tmpl, support, config);
  CHECK(second.skipped);
  CHECK(second.verbalizer.content_hash() == first.verbalizer.content_hash());
  // priors are still recomputed for calibration use
  CHECK(second.priors.support_size == 2);
  CHECK(second.priors.word_prior.size() == first.priors.word_prior.size());
  for (const auto& [word, p] : first.priors.word_prior) {
    CHECK(second.priors.prior_of(word) == doctest::Approx(p).epsilon(1e-15));
  }

  // any input change invalidates the fingerprint
  std::vector<std::string> larger = support;
  larger.push_back("background prior background");
  PipelineOutcome third = refine_pipeline(first.verbalizer, mlm, tmpl, larger, config);
  CHECK_FALSE(third.skipped);

  CHECK_THROWS_AS(refine_pipeline(v, mlm, tmpl, {}, config), UsageError);
  RefinementConfig bad = config;
  bad.frequency_quantile = 1.0;
  CHECK_THROWS_AS(refine_pipeline(v, mlm, tmpl, support, bad), UsageError);
}

TEST_CASE("prior files round trip and reject damage") {
  TempDir tmp;
  auto priors = priors_of({{"background", 0.0625}, {"prior", 0.03125}}, 12);
  save_priors(priors, tmp.file("p.json"));
  PriorEstimate loaded = load_priors(tmp.file("p.json"));
  CHECK(loaded.support_size == 12);
  CHECK(loaded.word_prior == priors.word_prior);

  CHECK_THROWS_AS(load_priors(tmp.file("absent.json")), DataError);
  testutil::write_file(tmp.file("broken.json"), "not json");
  CHECK_THROWS_AS(load_priors(tmp.file("broken.json")), DataError);
  testutil::write_file(tmp.file("versioned.json"),
                       "{\"version\": 9, \"support_size\": 1, \"priors\": {}}");
  CHECK_THROWS_AS(load_priors(tmp.file("versioned.json")), DataError);
  testutil::write_file(tmp.file("range.json"),
                       "{\"version\": 1, \"support_size\": 1, \"priors\": {\"x\": 2.0}}");
  CHECK_THROWS_AS(load_priors(tmp.file("range.json")), ModelError);

  PriorEstimate empty_support;
  CHECK_THROWS_AS(save_priors(empty_support, tmp.file("bad.json")), ModelError);
}

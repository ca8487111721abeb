#include "citeintent/mlm_registry.hpp"

#include "citeintent/errors.hpp"
#include "citeintent/http_mlm.hpp"
#include "citeintent/mock_mlm.hpp"
#include "citeintent/toy_diff_mlm.hpp"

namespace citeintent {

namespace {

VocabularyPtr builtin_vocabulary() {
  return std::make_shared<Vocabulary>(builtin_vocabulary_words());
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

MlmPtr create_mlm(const std::string& spec, std::uint64_t seed) {
  if (spec == "mock") return std::make_unique<MockMlm>(builtin_vocabulary());
  if (starts_with(spec, "mock:")) {
    return std::make_unique<MockMlm>(load_vocabulary(spec.substr(5)));
  }
  if (spec == "toy-new") return std::make_unique<ToyDiffMlm>(builtin_vocabulary(), seed);
  if (starts_with(spec, "toy-new:")) {
    return std::make_unique<ToyDiffMlm>(load_vocabulary(spec.substr(8)), seed);
  }
  if (starts_with(spec, "toy:")) return ToyDiffMlm::load(spec.substr(4));
  if (starts_with(spec, "http://") || starts_with(spec, "https://")) {
    return std::make_unique<HttpMlm>(spec);
  }
  throw UsageError("unknown model identity '" + spec +
                   "' (expected mock[:vocab], toy:<ckpt>, toy-new[:vocab], or an http URL)");
}

}  // namespace citeintent

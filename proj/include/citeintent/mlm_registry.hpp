#pragma once

#include <cstdint>
#include <string>

#include "citeintent/mlm.hpp"

namespace citeintent {

// Creates a model backend from its identity string:
//   "mock"                      frequency mock over the built-in vocabulary
//   "mock:<vocab.txt>"          frequency mock over a vocabulary file
//   "toy:<checkpoint.json>"     trainable toy model from a checkpoint
//   "toy-new"                   freshly initialized toy model (uses seed)
//   "toy-new:<vocab.txt>"       fresh toy model over a vocabulary file
//   "http://..." / "https://.." remote model server
MlmPtr create_mlm(const std::string& spec, std::uint64_t seed = 0);

}  // namespace citeintent

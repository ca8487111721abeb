#include "citeintent/toy_diff_mlm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "citeintent/errors.hpp"
#include "citeintent/hash.hpp"
#include "citeintent/rng.hpp"
#include "citeintent/text.hpp"
#include "citeintent/version.hpp"

namespace citeintent {

namespace {

using json = nlohmann::ordered_json;

constexpr double kInitScale = 0.5;
constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEpsilon = 1e-8;

void adam_update(std::vector<double>& params, const std::vector<double>& grad,
                 std::vector<double>& m, std::vector<double>& v, std::uint64_t step,
                 double learning_rate) {
  double bias1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(step));
  double bias2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m[i] = kAdamBeta1 * m[i] + (1.0 - kAdamBeta1) * grad[i];
    v[i] = kAdamBeta2 * v[i] + (1.0 - kAdamBeta2) * grad[i] * grad[i];
    params[i] -= learning_rate * (m[i] / bias1) / (std::sqrt(v[i] / bias2) + kAdamEpsilon);
  }
}

}  // namespace

ToyDiffMlm::ToyDiffMlm(VocabularyPtr vocab, std::uint64_t seed) : vocab_(std::move(vocab)) {
  if (!vocab_) throw ModelError("toy model needs a vocabulary");
  dim_ = vocab_->size();
  Rng rng(seed);
  weights_.resize(dim_ * dim_);
  bias_.resize(dim_);
  for (auto& w : weights_) w = rng.symmetric(kInitScale);
  for (auto& b : bias_) b = rng.symmetric(kInitScale);
  m_weights_.assign(dim_ * dim_, 0.0);
  v_weights_.assign(dim_ * dim_, 0.0);
  m_bias_.assign(dim_, 0.0);
  v_bias_.assign(dim_, 0.0);
}

std::string ToyDiffMlm::identity() const {
  std::uint64_t h = fnv1a("toy");
  for (const auto& word : vocab_->words()) h = fnv1a(word, h);
  return "toy/" + hash_hex(h).substr(0, 8);
}

std::vector<std::size_t> ToyDiffMlm::tokenize(const std::string& text) const {
  std::vector<std::size_t> out;
  for (const auto& token : alpha_tokens(text, 1, false)) {
    if (auto resolved = vocab_->resolve(token)) out.push_back(resolved->id);
  }
  return out;
}

std::vector<double> ToyDiffMlm::context_of(const std::vector<std::size_t>& tokens,
                                           std::size_t mask_index) const {
  if (mask_index >= tokens.size()) throw ModelError("mask index outside the token sequence");
  std::vector<double> context(dim_, 0.0);
  double count = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i == mask_index) continue;
    if (tokens[i] >= dim_) throw ModelError("token id outside the vocabulary");
    context[tokens[i]] += 1.0;
    count += 1.0;
  }
  if (count > 0.0) {
    for (auto& c : context) c /= count;
  }
  return context;
}

std::vector<double> ToyDiffMlm::forward_probs(const std::vector<double>& context) const {
  std::vector<double> logits(bias_);
  for (std::size_t r = 0; r < dim_; ++r) {
    const double* row = weights_.data() + r * dim_;
    double acc = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) acc += row[c] * context[c];
    logits[r] += acc;
  }
  double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (auto& z : logits) {
    z = std::exp(z - top);
    total += z;
  }
  for (auto& z : logits) z /= total;
  return logits;
}

MaskDistribution ToyDiffMlm::distribution_at(const std::vector<std::size_t>& tokens,
                                             std::size_t mask_index) {
  MaskDistribution dist;
  dist.vocab = vocab_;
  dist.probs = forward_probs(context_of(tokens, mask_index));
  return dist;
}

std::string ToyDiffMlm::state_hash() const {
  std::uint64_t h = fnv1a_u64(adam_step_);
  for (double w : weights_) h = fnv1a_double(w, h);
  for (double b : bias_) h = fnv1a_double(b, h);
  for (double m : m_weights_) h = fnv1a_double(m, h);
  for (double m : m_bias_) h = fnv1a_double(m, h);
  return hash_hex(h);
}

std::vector<std::vector<double>> ToyDiffMlm::forward_train(
    const std::vector<TokenizedPrompt>& batch) {
  if (batch.empty()) throw ModelError("empty training batch");
  std::vector<std::vector<double>> probs;
  probs.reserve(batch.size());
  for (const auto& prompt : batch) {
    probs.push_back(forward_probs(context_of(prompt.token_ids, prompt.mask_index)));
  }
  pending_batch_ = batch;
  return probs;
}

ToyDiffMlm::Gradients ToyDiffMlm::gradients(
    const std::vector<TokenizedPrompt>& batch,
    const std::vector<std::vector<double>>& grad_probs) const {
  if (batch.size() != grad_probs.size()) {
    throw ModelError("gradient batch size does not match the forward batch");
  }
  Gradients out;
  out.weight_grad.assign(dim_ * dim_, 0.0);
  out.bias_grad.assign(dim_, 0.0);
  for (std::size_t s = 0; s < batch.size(); ++s) {
    std::vector<double> context = context_of(batch[s].token_ids, batch[s].mask_index);
    std::vector<double> p = forward_probs(context);
    const auto& g = grad_probs[s];
    if (g.size() != dim_) throw ModelError("probability gradient has the wrong size");
    // Softmax backward: dz = p * (g - <p, g>).
    double dot = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) dot += p[i] * g[i];
    for (std::size_t r = 0; r < dim_; ++r) {
      double dz = p[r] * (g[r] - dot);
      out.bias_grad[r] += dz;
      double* row = out.weight_grad.data() + r * dim_;
      for (std::size_t c = 0; c < dim_; ++c) row[c] += dz * context[c];
    }
  }
  return out;
}

void ToyDiffMlm::backward_step(const std::vector<std::vector<double>>& grad_probs,
                               double learning_rate) {
  if (pending_batch_.empty()) throw ModelError("backward step without a pending forward batch");
  Gradients grads = gradients(pending_batch_, grad_probs);
  pending_batch_.clear();
  ++adam_step_;
  adam_update(weights_, grads.weight_grad, m_weights_, v_weights_, adam_step_, learning_rate);
  adam_update(bias_, grads.bias_grad, m_bias_, v_bias_, adam_step_, learning_rate);
}

double& ToyDiffMlm::weight_at(std::size_t row, std::size_t col) {
  return weights_.at(row * dim_ + col);
}

double& ToyDiffMlm::bias_at(std::size_t row) { return bias_.at(row); }

void ToyDiffMlm::save_checkpoint(const std::string& path) const {
  json doc;
  doc["version"] = kCheckpointVersion;
  doc["tool_version"] = kToolVersion;
  doc["kind"] = "toy";
  doc["vocab"] = vocab_->words();
  auto matrix = [this](const std::vector<double>& flat) {
    json rows = json::array();
    for (std::size_t r = 0; r < dim_; ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < dim_; ++c) row.push_back(flat[r * dim_ + c]);
      rows.push_back(std::move(row));
    }
    return rows;
  };
  doc["weights"] = matrix(weights_);
  doc["bias"] = bias_;
  json adam;
  adam["step"] = adam_step_;
  adam["m_weights"] = matrix(m_weights_);
  adam["v_weights"] = matrix(v_weights_);
  adam["m_bias"] = m_bias_;
  adam["v_bias"] = v_bias_;
  doc["adam"] = adam;
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint file: " + path);
  out << doc.dump() << "\n";
}

std::unique_ptr<ToyDiffMlm> ToyDiffMlm::load(const std::string& checkpoint_path) {
  std::ifstream in(checkpoint_path);
  if (!in) throw ModelError("cannot open checkpoint file: " + checkpoint_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ModelError("checkpoint " + checkpoint_path + " is not valid JSON: " + e.what());
  }
  try {
    if (doc.at("version").get<int>() != kCheckpointVersion ||
        doc.at("kind").get<std::string>() != "toy") {
      throw ModelError("checkpoint " + checkpoint_path + " has an unsupported format");
    }
    auto model = std::unique_ptr<ToyDiffMlm>(new ToyDiffMlm());
    model->vocab_ =
        std::make_shared<Vocabulary>(doc.at("vocab").get<std::vector<std::string>>());
    model->dim_ = model->vocab_->size();
    auto flat = [&](const json& rows) {
      std::vector<double> out;
      out.reserve(model->dim_ * model->dim_);
      for (const auto& row : rows) {
        for (const auto& value : row) out.push_back(value.get<double>());
      }
      if (out.size() != model->dim_ * model->dim_) {
        throw ModelError("checkpoint matrix shape does not match its vocabulary");
      }
      return out;
    };
    model->weights_ = flat(doc.at("weights"));
    model->bias_ = doc.at("bias").get<std::vector<double>>();
    const json& adam = doc.at("adam");
    model->adam_step_ = adam.at("step").get<std::uint64_t>();
    model->m_weights_ = flat(adam.at("m_weights"));
    model->v_weights_ = flat(adam.at("v_weights"));
    model->m_bias_ = adam.at("m_bias").get<std::vector<double>>();
    model->v_bias_ = adam.at("v_bias").get<std::vector<double>>();
    if (model->bias_.size() != model->dim_ || model->m_bias_.size() != model->dim_ ||
        model->v_bias_.size() != model->dim_) {
      throw ModelError("checkpoint vector shape does not match its vocabulary");
    }
    return model;
  } catch (const json::exception& e) {
    throw ModelError("checkpoint " + checkpoint_path + " is malformed: " + e.what());
  }
}

}  // namespace citeintent

#include "citeintent/http_mlm.hpp"

#include <httplib.h>

#include <json.hpp>

#include "citeintent/errors.hpp"

namespace citeintent {

namespace {
using json = nlohmann::json;
}

struct HttpMlm::Impl {
  explicit Impl(const std::string& base_url) : url(base_url), client(base_url) {
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(300, 0);
    client.set_write_timeout(300, 0);
  }

  json parse(const httplib::Result& res, const std::string& path) const {
    if (!res) {
      throw ModelError("model server unreachable at " + url + path + " (" +
                       httplib::to_string(res.error()) + ")");
    }
    if (res->status != 200) {
      throw ModelError("model server returned HTTP " + std::to_string(res->status) + " for " +
                       path + ": " + res->body);
    }
    try {
      return json::parse(res->body);
    } catch (const json::exception& e) {
      throw ModelError("model server sent invalid JSON for " + path + ": " + e.what());
    }
  }

  json get(const std::string& path) { return parse(client.Get(path), path); }

  json post(const std::string& path, const json& body) {
    return parse(client.Post(path, body.dump(), "application/json"), path);
  }

  std::string url;
  mutable httplib::Client client;
  std::string identity;
  std::size_t max_sequence_length = 0;
  bool trainable = false;
  VocabularyPtr vocab;
};

HttpMlm::HttpMlm(const std::string& base_url) : impl_(std::make_unique<Impl>(base_url)) {
  try {
    json info = impl_->get("/info");
    impl_->identity = info.at("identity").get<std::string>();
    impl_->max_sequence_length = info.at("max_sequence_length").get<std::size_t>();
    impl_->trainable = info.at("trainable").get<bool>();
    json vocab = impl_->get("/vocab");
    impl_->vocab =
        std::make_shared<Vocabulary>(vocab.at("words").get<std::vector<std::string>>());
  } catch (const json::exception& e) {
    throw ModelError("model server handshake failed: " + std::string(e.what()));
  }
}

HttpMlm::~HttpMlm() = default;

std::string HttpMlm::identity() const { return impl_->identity; }

std::size_t HttpMlm::max_sequence_length() const { return impl_->max_sequence_length; }

bool HttpMlm::trainable() const { return impl_->trainable; }

VocabularyPtr HttpMlm::vocabulary() const { return impl_->vocab; }

std::vector<std::size_t> HttpMlm::tokenize(const std::string& text) const {
  json reply = impl_->post("/tokenize", json{{"text", text}});
  try {
    return reply.at("tokens").get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw ModelError("model server sent a malformed tokenize reply: " + std::string(e.what()));
  }
}

MaskDistribution HttpMlm::distribution_at(const std::vector<std::size_t>& tokens,
                                          std::size_t mask_index) {
  json reply =
      impl_->post("/mask_distribution", json{{"tokens", tokens}, {"mask_index", mask_index}});
  MaskDistribution dist;
  dist.vocab = impl_->vocab;
  try {
    dist.probs = reply.at("probs").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ModelError("model server sent a malformed distribution reply: " +
                     std::string(e.what()));
  }
  return dist;
}

std::string HttpMlm::state_hash() const {
  json reply = impl_->get("/state_hash");
  try {
    return reply.at("state_hash").get<std::string>();
  } catch (const json::exception& e) {
    throw ModelError("model server sent a malformed state hash reply: " +
                     std::string(e.what()));
  }
}

std::vector<std::vector<double>> HttpMlm::forward_train(
    const std::vector<TokenizedPrompt>& batch) {
  if (!impl_->trainable) throw ModelError("model server does not support training");
  json items = json::array();
  for (const auto& prompt : batch) {
    items.push_back(json{{"tokens", prompt.token_ids}, {"mask_index", prompt.mask_index}});
  }
  json reply = impl_->post("/train/forward", json{{"batch", items}});
  try {
    return reply.at("probs").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw ModelError("model server sent a malformed forward reply: " + std::string(e.what()));
  }
}

void HttpMlm::backward_step(const std::vector<std::vector<double>>& grad_probs,
                            double learning_rate) {
  if (!impl_->trainable) throw ModelError("model server does not support training");
  impl_->post("/train/backward",
              json{{"grad_probs", grad_probs}, {"learning_rate", learning_rate}});
}

void HttpMlm::save_checkpoint(const std::string& path) const {
  impl_->post("/save", json{{"path", path}});
}

void HttpMlm::begin_run(std::uint64_t seed) {
  impl_->post("/train/begin", json{{"seed", seed}});
}

}  // namespace citeintent

#pragma once

#include <cstdlib>
#include <optional>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "errors.hpp"
#include "eval.hpp"

namespace cello {

/// Endpoint settings for a remote model. The API key is never read from disk
/// or flags; only the environment supplies it.
struct HttpClientConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string path = "/generate";
  std::string model = "default";
  int timeout_ms = 30000;
  int max_tokens = 512;
  std::string api_key_env = "CELLO_API_KEY";
};

/// POSTs {model, prompt, image_ref, max_tokens} and expects {"text": ...}.
/// Every transport or protocol problem surfaces as ClientUnavailable; the
/// evaluation loop decides whether to retry.
class HttpModelClient : public ModelClient {
 public:
  explicit HttpModelClient(HttpClientConfig cfg) : cfg_(std::move(cfg)) {
    if (const char* key = std::getenv(cfg_.api_key_env.c_str())) api_key_ = key;
  }

  std::string name() const override { return cfg_.model; }
  int timeout_ms() const override { return cfg_.timeout_ms; }

  std::string generate(const std::string& prompt, const std::string& image_ref) override {
    httplib::Client http(cfg_.host, cfg_.port);
    http.set_connection_timeout(0, cfg_.timeout_ms * 1000);
    http.set_read_timeout(cfg_.timeout_ms / 1000, (cfg_.timeout_ms % 1000) * 1000);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    nlohmann::ordered_json body;
    body["model"] = cfg_.model;
    body["prompt"] = prompt;
    body["image_ref"] = image_ref;
    body["max_tokens"] = cfg_.max_tokens;

    auto res = http.Post(cfg_.path, headers, body.dump(), "application/json");
    if (!res)
      fail(ErrorKind::ClientUnavailable,
           "no response from " + cfg_.host + ":" + std::to_string(cfg_.port));
    if (res->status != 200)
      fail(ErrorKind::ClientUnavailable, "endpoint returned status " + std::to_string(res->status));
    auto doc = nlohmann::json::parse(res->body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("text") ||
        !doc["text"].is_string())
      fail(ErrorKind::ClientUnavailable, "response body lacks a text field");
    return doc["text"].get<std::string>();
  }

 private:
  HttpClientConfig cfg_;
  std::string api_key_;
};

}  // namespace cello

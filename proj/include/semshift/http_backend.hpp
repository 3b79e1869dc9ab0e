#pragma once

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif

#include <cstdlib>
#include <optional>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "semshift/backend.hpp"
#include "semshift/errors.hpp"

namespace semshift {

// A chat-completions endpoint. base_url is scheme://host[:port]; the request
// path is fixed. The bearer token is read from the environment variable named
// by auth_env so credentials never land in a manifest or a log.
struct ModelEndpoint {
  std::string base_url;
  std::string model_id;
  std::string auth_env;
  double timeout_s = 120.0;
  int max_parallel = 1;
};

class HttpChatBackend : public ChatBackend {
 public:
  explicit HttpChatBackend(ModelEndpoint endpoint)
      : endpoint_(std::move(endpoint)) {
    if (!endpoint_.auth_env.empty()) {
      if (const char* tok = std::getenv(endpoint_.auth_env.c_str())) {
        token_ = tok;
      }
    }
  }

  std::string chat(const ChatRequest& request) override {
    nlohmann::json body;
    body["model"] = endpoint_.model_id;
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;
    if (request.seed) body["seed"] = *request.seed;
    auto& messages = body["messages"] = nlohmann::json::array();
    for (const auto& m : request.messages) {
      messages.push_back({{"role", m.role}, {"content", m.content}});
    }

    // One client per call: trivially safe under run_task's worker pool.
    httplib::Client client(endpoint_.base_url);
    auto secs = static_cast<time_t>(endpoint_.timeout_s);
    auto usecs = static_cast<time_t>(
        (endpoint_.timeout_s - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    if (!token_.empty()) {
      headers.emplace("Authorization", "Bearer " + token_);
    }

    auto res = client.Post("/v1/chat/completions", headers, body.dump(),
                           "application/json");
    if (!res) {
      auto err = res.error();
      std::string what = endpoint_.base_url + ": " + httplib::to_string(err);
      if (err == httplib::Error::ConnectionTimeout ||
          err == httplib::Error::Read || err == httplib::Error::Write) {
        throw TimeoutError(what);
      }
      throw EndpointUnreachable(what);
    }
    if (res->status != 200) {
      throw EndpointUnreachable(endpoint_.base_url + ": HTTP " +
                                std::to_string(res->status) + " " +
                                res->body.substr(0, 200));
    }

    try {
      auto obj = nlohmann::json::parse(res->body);
      return obj.at("choices").at(0).at("message").at("content")
          .get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw EndpointUnreachable(endpoint_.base_url +
                                ": malformed chat-completions response");
    }
  }

  const std::string& model_id() const override { return endpoint_.model_id; }

  const ModelEndpoint& endpoint() const { return endpoint_; }

 private:
  ModelEndpoint endpoint_;
  std::string token_;
};

}  // namespace semshift

// Copyright 2026 The Parry Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Remote classifier client. Protocol: POST /classify with {"text": str},
// reply {"label": int}. Bearer auth comes from an environment variable.
// Any non-2xx status or malformed body is a BackendError; there is no
// silent default label.

#ifndef PARRY_REMOTE_MODEL_HPP_
#define PARRY_REMOTE_MODEL_HPP_

#include <chrono>
#include <cstdlib>
#include <semaphore>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "parry/errors.hpp"
#include "parry/text.hpp"
#include "parry/victim.hpp"

namespace parry {

struct RemoteModelConfig {
  std::string endpoint;  // base URL
  std::string auth_token_env = "PARRY_MODEL_TOKEN";
  int timeout_ms = 10000;
  int max_retries = 3;
  int max_in_flight = 8;
  int num_classes = 2;

  void validate() const {
    if (endpoint.empty()) throw ConfigError("remote model endpoint is empty");
    if (timeout_ms <= 0) throw ConfigError("remote timeout must be > 0");
    if (max_in_flight <= 0 || max_in_flight > 256) {
      throw ConfigError("max_in_flight must be in 1..256");
    }
  }
};

class RemoteModel : public Classifier {
 public:
  explicit RemoteModel(RemoteModelConfig config)
      : config_(std::move(config)),
        in_flight_(static_cast<std::ptrdiff_t>(config_.max_in_flight)) {
    config_.validate();
  }

  int classify(const std::string& text) const override {
    if (trim(text).empty()) throw InvalidInputError("classify: empty text");
    in_flight_.acquire();
    struct Release {
      std::counting_semaphore<256>& s;
      ~Release() { s.release(); }
    } release{in_flight_};

    const std::string body = nlohmann::json{{"text", text}}.dump();
    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(25 * attempt));
      }
      httplib::Client client(config_.endpoint);
      client.set_connection_timeout(0, config_.timeout_ms * 1000);
      client.set_read_timeout(config_.timeout_ms / 1000,
                              (config_.timeout_ms % 1000) * 1000);
      httplib::Headers headers;
      if (const char* token = std::getenv(config_.auth_token_env.c_str())) {
        headers.emplace("Authorization", std::string("Bearer ") + token);
      }
      auto res = client.Post("/classify", headers, body, "application/json");
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 500) {
        last_error = "server error: HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status < 200 || res->status >= 300) {
        throw BackendError("remote model rejected the request: HTTP " +
                           std::to_string(res->status));
      }
      nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
      if (reply.is_discarded() || !reply.contains("label") ||
          !reply["label"].is_number_integer()) {
        throw BackendError("remote model reply is malformed: " + res->body);
      }
      const int label = reply["label"].get<int>();
      if (label < 0 || label >= config_.num_classes) {
        throw BackendError("remote model returned an out-of-range label: " +
                           std::to_string(label));
      }
      return label;
    }
    throw BackendError("remote model unreachable after " +
                       std::to_string(config_.max_retries + 1) +
                       " attempts: " + last_error);
  }

  int num_classes() const override { return config_.num_classes; }

 private:
  RemoteModelConfig config_;
  mutable std::counting_semaphore<256> in_flight_;
};

}  // namespace parry

#endif  // PARRY_REMOTE_MODEL_HPP_

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
// OpenAI-compatible chat-completions client, the LLM paraphrase backend,
// and the meta-prompt mutator. Requests go through a process-global
// rate limiter; failures surface as BackendError after bounded retries,
// never as silent passthrough.

#ifndef PARRY_LLM_HPP_
#define PARRY_LLM_HPP_

#include <chrono>
#include <cctype>
#include <cstdlib>
#include <deque>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "parry/core.hpp"
#include "parry/errors.hpp"
#include "parry/mutation.hpp"
#include "parry/paraphrase.hpp"
#include "parry/tables.hpp"
#include "parry/text.hpp"

namespace parry {

struct LlmBackendConfig {
  std::string endpoint;  // base URL, e.g. http://localhost:8031
  std::string model = "gpt-3.5-turbo";
  double temperature = 0.0;  // 0 for reproducibility
  int max_retries = 3;
  int requests_per_minute = 60;
  int timeout_ms = 30000;
  size_t batch_size = 16;
  std::string api_key_env = "PARRY_LLM_API_KEY";

  void validate() const {
    if (endpoint.empty()) throw ConfigError("llm endpoint is empty");
    if (temperature < 0) throw ConfigError("llm temperature must be >= 0");
    if (batch_size == 0 || batch_size > 64) {
      throw ConfigError("llm batch_size must be in 1..64");
    }
    if (requests_per_minute <= 0) {
      throw ConfigError("llm requests_per_minute must be positive");
    }
  }
};

// Process-global sliding-window limiter shared by every LLM-backed
// component (paraphraser and mutator alike).
class RateLimiter {
 public:
  static RateLimiter& global() {
    static RateLimiter instance;
    return instance;
  }

  void acquire(int per_minute) {
    using clock = std::chrono::steady_clock;
    while (true) {
      clock::time_point wait_until;
      {
        std::lock_guard lock(mutex_);
        const auto now = clock::now();
        while (!stamps_.empty() &&
               now - stamps_.front() > std::chrono::minutes(1)) {
          stamps_.pop_front();
        }
        if (static_cast<int>(stamps_.size()) < per_minute) {
          stamps_.push_back(now);
          return;
        }
        wait_until = stamps_.front() + std::chrono::minutes(1);
      }
      std::this_thread::sleep_until(wait_until);
    }
  }

 private:
  std::mutex mutex_;
  std::deque<std::chrono::steady_clock::time_point> stamps_;
};

// Minimal chat client. One POST per call; retries transport errors and 5xx
// with linear backoff.
class LlmClient {
 public:
  explicit LlmClient(LlmBackendConfig config) : config_(std::move(config)) {
    config_.validate();
  }

  std::string chat(const std::string& system_message,
                   const std::string& user_message) const {
    nlohmann::json request = {
        {"model", config_.model},
        {"temperature", config_.temperature},
        {"messages",
         {{{"role", "system"}, {"content", system_message}},
          {{"role", "user"}, {"content", user_message}}}}};
    const std::string body = request.dump();

    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
      }
      RateLimiter::global().acquire(config_.requests_per_minute);
      httplib::Client client(config_.endpoint);
      client.set_connection_timeout(0, config_.timeout_ms * 1000);
      client.set_read_timeout(config_.timeout_ms / 1000,
                              (config_.timeout_ms % 1000) * 1000);
      httplib::Headers headers;
      if (const char* key = std::getenv(config_.api_key_env.c_str())) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
      }
      auto res = client.Post("/v1/chat/completions", headers, body,
                             "application/json");
      if (!res) {
        last_error = "transport error: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 500) {
        last_error = "server error: HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status < 200 || res->status >= 300) {
        throw BackendError("llm request rejected: HTTP " +
                           std::to_string(res->status) + ": " + res->body);
      }
      nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
      if (reply.is_discarded() || !reply.contains("choices") ||
          reply["choices"].empty() ||
          !reply["choices"][0].contains("message")) {
        throw BackendError("llm response is malformed: " + res->body);
      }
      const std::string content =
          reply["choices"][0]["message"].value("content", "");
      if (trim(content).empty()) {
        throw BackendError("llm returned an empty completion");
      }
      return content;
    }
    throw BackendError("llm request failed after " +
                       std::to_string(config_.max_retries + 1) +
                       " attempts: " + last_error);
  }

  const LlmBackendConfig& config() const { return config_; }

 private:
  LlmBackendConfig config_;
};

// LLM paraphrase backend. Sentences are grouped up to batch_size per
// request with [[k]] index tags; a misaligned reply falls back to
// per-sentence requests, and persistent failure is a BackendError.
class LlmParaphraser : public Paraphraser {
 public:
  explicit LlmParaphraser(LlmBackendConfig config)
      : client_(std::move(config)),
        id_("llm:" + client_.config().model + "@" +
            fnv1a64_hex(client_.config().endpoint)) {}

  std::string paraphrase(const Prompt& prompt,
                         const std::string& text) override {
    if (trim(text).empty()) throw InvalidInputError("paraphrase: empty text");
    auto out = paraphrase_batch(prompt, {text});
    return out.front();
  }

  std::vector<std::string> paraphrase_batch(
      const Prompt& prompt, const std::vector<std::string>& texts) {
    std::vector<std::string> out;
    size_t start = 0;
    while (start < texts.size()) {
      const size_t end =
          std::min(texts.size(), start + client_.config().batch_size);
      std::vector<std::string> chunk(texts.begin() + start,
                                     texts.begin() + end);
      std::vector<std::string> rewritten;
      try {
        rewritten = batch_request(prompt, chunk);
      } catch (const BackendError&) {
        // Per-sentence fallback; failures here are final.
        rewritten.clear();
        for (const auto& t : chunk) {
          rewritten.push_back(single_request(prompt, t));
        }
      }
      out.insert(out.end(), rewritten.begin(), rewritten.end());
      start = end;
    }
    return out;
  }

  std::string backend_id() const override { return id_; }

 private:
  std::string single_request(const Prompt& prompt, const std::string& text) {
    const std::string content = client_.chat(render_prompt(prompt), text);
    const std::string cleaned = trim(content);
    if (cleaned.empty()) throw BackendError("llm returned empty paraphrase");
    return cleaned;
  }

  std::vector<std::string> batch_request(const Prompt& prompt,
                                         const std::vector<std::string>& texts) {
    std::string user;
    for (size_t i = 0; i < texts.size(); ++i) {
      user += "[[" + std::to_string(i) + "]] " + texts[i] + "\n";
    }
    const std::string system =
        render_prompt(prompt) +
        " Rewrite each tagged line and keep its [[k]] tag.";
    const std::string content = client_.chat(system, user);

    std::vector<std::string> out(texts.size());
    std::vector<bool> seen(texts.size(), false);
    std::istringstream lines(content);
    std::string line;
    while (std::getline(lines, line)) {
      line = trim(line);
      if (line.size() < 5 || line.rfind("[[", 0) != 0) continue;
      const size_t close = line.find("]]");
      if (close == std::string::npos) continue;
      size_t index = 0;
      try {
        index = std::stoul(line.substr(2, close - 2));
      } catch (const std::exception&) {
        continue;
      }
      if (index >= texts.size()) continue;
      const std::string body = trim(line.substr(close + 2));
      if (body.empty()) continue;
      out[index] = body;
      seen[index] = true;
    }
    for (bool s : seen) {
      if (!s) {
        throw BackendError("llm batch reply is misaligned with its input");
      }
    }
    return out;
  }

  LlmClient client_;
  std::string id_;
};

// Meta-prompt mutator: delegates the keyword/structure rules to the LLM.
// Templates are data; the built-ins ship in tables.hpp.
class LlmMutatorBackend : public MutatorBackend {
 public:
  explicit LlmMutatorBackend(LlmBackendConfig config,
                             std::string keyword_template =
                                 std::string(tables::kMetaPromptKeyword),
                             std::string structure_template =
                                 std::string(tables::kMetaPromptStructure))
      : client_(std::move(config)),
        keyword_template_(std::move(keyword_template)),
        structure_template_(std::move(structure_template)) {}

  std::vector<std::string> propose(const std::string& rule,
                                   const std::string& candidate_suffix,
                                   int k) override {
    const std::string& tmpl =
        rule == "structure" ? structure_template_ : keyword_template_;
    std::string user = tmpl;
    replace_all(&user, "{candidate}", candidate_suffix);
    replace_all(&user, "{k}", std::to_string(k));
    const std::string content = client_.chat(
        "You invent short style phrases for a paraphrasing instruction. "
        "Reply with one phrase per line and nothing else.",
        user);
    std::vector<std::string> out;
    std::istringstream lines(content);
    std::string line;
    while (std::getline(lines, line) && static_cast<int>(out.size()) < k) {
      std::string s = trim(line);
      // Strip list markers and stray quotes.
      while (!s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) ||
                            s[0] == '.' || s[0] == ')' || s[0] == '-' ||
                            s[0] == '*' || s[0] == ' ')) {
        s.erase(s.begin());
      }
      while (!s.empty() && (s.front() == '"' || s.front() == '\'')) {
        s.erase(s.begin());
      }
      while (!s.empty() && (s.back() == '"' || s.back() == '\'')) {
        s.pop_back();
      }
      s = trim(s);
      if (!s.empty()) out.push_back(s);
    }
    return out;
  }

 private:
  static void replace_all(std::string* s, const std::string& needle,
                          const std::string& value) {
    size_t pos = 0;
    while ((pos = s->find(needle, pos)) != std::string::npos) {
      s->replace(pos, needle.size(), value);
      pos += value.size();
    }
  }

  LlmClient client_;
  std::string keyword_template_;
  std::string structure_template_;
};

}  // namespace parry

#endif  // PARRY_LLM_HPP_

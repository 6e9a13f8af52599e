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

#ifndef PARRY_ERRORS_HPP_
#define PARRY_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace parry {

// Caller handed us something that violates a documented precondition.
class InvalidInputError : public std::runtime_error {
 public:
  explicit InvalidInputError(const std::string& what)
      : std::runtime_error(what) {}
};

// A remote backend (LLM, remote classifier) failed after retries, or
// returned a malformed/empty payload. Never raised by local backends.
class BackendError : public std::runtime_error {
 public:
  explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

// Trigger inversion exhausted its search without reaching the ASR floor.
// Usually means the model under test is not backdoored.
class NoSurrogateError : public std::runtime_error {
 public:
  explicit NoSurrogateError(const std::string& what)
      : std::runtime_error(what) {}
};

// A config file, dataset file, or CLI invocation is unusable.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace parry

#endif  // PARRY_ERRORS_HPP_

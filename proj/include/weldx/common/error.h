// Copyright 2026 The Weldx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WELDX_COMMON_ERROR_H_
#define WELDX_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace weldx {

// Base class of every error raised by the library. `kind()` is a stable
// machine-readable tag used by the CLI and the audit service.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
  virtual const char* kind() const noexcept { return "error"; }
};

// Bad configuration: unknown ids, missing directories, malformed config files.
class ConfigError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config_error"; }
};

struct FieldError {
  std::string field;
  std::string message;
};

// Input values that violate a documented contract. Carries per-field
// diagnostics when the failing input is a structured record.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(message) {}
  ValidationError(const std::string& message, std::vector<FieldError> fields)
      : Error(message), fields_(std::move(fields)) {}
  const char* kind() const noexcept override { return "validation_error"; }
  const std::vector<FieldError>& fields() const { return fields_; }

 private:
  std::vector<FieldError> fields_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "not_found"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io_error"; }
};

// Image bytes that cannot be decoded. Always names the offending path.
class DecodeError : public IoError {
 public:
  DecodeError(const std::string& path, const std::string& detail)
      : IoError("cannot decode image '" + path + "': " + detail), path_(path) {}
  const char* kind() const noexcept override { return "decode_error"; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Training diverged (NaN/Inf loss). Converted into a failed trial by the
// search engine.
class NonFiniteLossError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "non_finite_loss"; }
};

// Raised by best-trial selection when every trial failed.
class NoResultError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "no_result"; }
};

// Persistent-store failures. Retryable ones are surfaced as 5xx by the API.
class StoreError : public Error {
 public:
  StoreError(const std::string& message, bool retryable)
      : Error(message), retryable_(retryable) {}
  const char* kind() const noexcept override { return "store_error"; }
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

}  // namespace weldx

#endif  // WELDX_COMMON_ERROR_H_

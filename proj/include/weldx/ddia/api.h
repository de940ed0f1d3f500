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

#ifndef WELDX_DDIA_API_H_
#define WELDX_DDIA_API_H_

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <string>

#include "weldx/ddia/store.h"

namespace weldx::ddia {

struct ApiRequest {
  std::string method;  // "GET", "POST"
  std::string path;    // without query string
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Transport-independent handler for the audit service.
//
//   GET  /api/cases?status=pending&page=1&page_size=50
//   GET  /api/cases/{case_id}
//   POST /api/cases/{case_id}/records
//   GET  /api/report
//   GET  /api/records/export
//
// Errors are {"error": {"kind", "message", "fields": [...], "retryable"}}.
class AuditApi {
 public:
  using Clock = std::function<int64_t()>;

  // `clock` stamps submissions that omit a timestamp.
  explicit AuditApi(AuditStore& store, Clock clock = NowMillis);

  ApiResponse Handle(const ApiRequest& request) const;

 private:
  ApiResponse ListCases(const ApiRequest& request) const;
  ApiResponse GetCase(const std::string& case_id) const;
  ApiResponse Submit(const std::string& case_id, const std::string& body) const;
  ApiResponse Report() const;
  ApiResponse Export() const;

  AuditStore& store_;
  Clock clock_;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  // Served under /artifacts/.
  std::filesystem::path artifact_root;
  // Called with the bound port once listening.
  std::function<void(int)> on_listen;
  // Polled; the server stops when it becomes true.
  const std::atomic<bool>* stop = nullptr;
};

// Blocks until `stop` is set. IoError when the port cannot be bound.
void Serve(AuditApi& api, const ServeOptions& options);

}  // namespace weldx::ddia

#endif  // WELDX_DDIA_API_H_

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

#include "weldx/ddia/api.h"

#include <charconv>
#include <chrono>
#include <thread>

#include <httplib.h>

#include "weldx/common/error.h"

namespace weldx::ddia {

namespace {

ApiResponse JsonResponse(int status, const Json& body) {
  return {status, "application/json", body.dump()};
}

ApiResponse ErrorResponse(int status, const std::string& kind,
                          const std::string& message,
                          const std::vector<FieldError>& fields = {},
                          bool retryable = false) {
  Json f = Json::array();
  for (const FieldError& e : fields) {
    f.push_back({{"field", e.field}, {"message", e.message}});
  }
  return JsonResponse(status, {{"error",
                                {{"kind", kind},
                                 {"message", message},
                                 {"fields", std::move(f)},
                                 {"retryable", retryable}}}});
}

int64_t QueryInt(const ApiRequest& r, const std::string& key, int64_t fallback) {
  auto it = r.query.find(key);
  if (it == r.query.end()) return fallback;
  int64_t v = 0;
  const char* b = it->second.data();
  const char* e = b + it->second.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) {
    throw ValidationError("bad query parameter", {{key, "must be an integer"}});
  }
  return v;
}

Json CaseJson(const AuditCase& c) {
  Json j = ToJson(c);
  j["image_url"] = "/artifacts/" + c.image_path;
  j["gradcam_overlay_url"] = "/artifacts/" + c.gradcam_overlay_path;
  j["lime_overlay_url"] = "/artifacts/" + c.lime_overlay_path;
  return j;
}

}  // namespace

AuditApi::AuditApi(AuditStore& store, Clock clock)
    : store_(store), clock_(std::move(clock)) {}

ApiResponse AuditApi::Handle(const ApiRequest& request) const {
  try {
    const std::string& p = request.path;
    constexpr std::string_view kCases = "/api/cases";
    if (p == kCases || p == "/api/cases/") {
      if (request.method != "GET") return ErrorResponse(405, "method_not_allowed", p);
      return ListCases(request);
    }
    if (p.rfind("/api/cases/", 0) == 0) {
      std::string rest = p.substr(kCases.size() + 1);
      constexpr std::string_view kRecords = "/records";
      if (rest.size() > kRecords.size() &&
          rest.compare(rest.size() - kRecords.size(), kRecords.size(), kRecords) == 0) {
        if (request.method != "POST") {
          return ErrorResponse(405, "method_not_allowed", p);
        }
        return Submit(rest.substr(0, rest.size() - kRecords.size()), request.body);
      }
      if (rest.find('/') != std::string::npos || rest.empty()) {
        return ErrorResponse(404, "not_found", "no route " + p);
      }
      if (request.method != "GET") return ErrorResponse(405, "method_not_allowed", p);
      return GetCase(rest);
    }
    if (p == "/api/report") {
      if (request.method != "GET") return ErrorResponse(405, "method_not_allowed", p);
      return Report();
    }
    if (p == "/api/records/export") {
      if (request.method != "GET") return ErrorResponse(405, "method_not_allowed", p);
      return Export();
    }
    return ErrorResponse(404, "not_found", "no route " + p);
  } catch (const ValidationError& e) {
    return ErrorResponse(400, e.kind(), e.what(), e.fields());
  } catch (const NotFoundError& e) {
    return ErrorResponse(404, e.kind(), e.what());
  } catch (const StoreError& e) {
    return ErrorResponse(503, e.kind(), e.what(), {}, e.retryable());
  } catch (const std::exception& e) {
    return ErrorResponse(500, "internal_error", e.what(), {}, true);
  }
}

ApiResponse AuditApi::ListCases(const ApiRequest& request) const {
  std::optional<CaseStatus> status;
  if (auto it = request.query.find("status"); it != request.query.end()) {
    status = ParseCaseStatus(it->second);
    if (!status) {
      throw ValidationError("bad query parameter",
                            {{"status", "must be pending or reviewed"}});
    }
  }
  const int64_t page = QueryInt(request, "page", 1);
  const int64_t page_size = QueryInt(request, "page_size", 50);
  CasePage result = store_.ListCases(status, page, page_size);
  Json cases = Json::array();
  for (const AuditCase& c : result.cases) cases.push_back(CaseJson(c));
  return JsonResponse(200, {{"cases", std::move(cases)},
                            {"page", page},
                            {"page_size", page_size},
                            {"total", result.total}});
}

ApiResponse AuditApi::GetCase(const std::string& case_id) const {
  Json j = CaseJson(store_.GetCase(case_id));
  Json records = Json::array();
  for (const AuditRecord& r : store_.CaseRecords(case_id)) records.push_back(ToJson(r));
  j["records"] = std::move(records);
  return JsonResponse(200, j);
}

ApiResponse AuditApi::Submit(const std::string& case_id, const std::string& body) const {
  Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    return ErrorResponse(400, "validation_error", "body is not valid JSON",
                         {{"", "must be a JSON object"}});
  }
  if (j.is_object()) {
    if (!j.contains("case_id")) {
      j["case_id"] = case_id;
    } else if (j["case_id"] != case_id) {
      return ErrorResponse(400, "validation_error", "invalid audit record",
                           {{"case_id", "does not match the request path"}});
    }
  }
  const AuditRecord record = RecordFromJson(j, clock_());
  const int64_t id = store_.SubmitRecord(record);
  Json out = ToJson(record);
  out["record_id"] = id;
  return JsonResponse(201, out);
}

ApiResponse AuditApi::Report() const {
  std::optional<AggregateReport> rep = store_.Report();
  if (!rep) return JsonResponse(200, {{"record_count", 0}});
  return JsonResponse(200, ToJson(*rep));
}

ApiResponse AuditApi::Export() const {
  std::string out;
  for (const StoredRecord& r : store_.History()) {
    Json j = ToJson(r.record);
    j["record_id"] = r.record_id;
    out += j.dump();
    out += '\n';
  }
  return {200, "application/x-ndjson", std::move(out)};
}

void Serve(AuditApi& api, const ServeOptions& options) {
  httplib::Server server;
  if (!options.artifact_root.empty() &&
      !server.set_mount_point("/artifacts", options.artifact_root.string())) {
    throw IoError("artifact directory '" + options.artifact_root.string() +
                  "' does not exist");
  }
  auto forward = [&api](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    for (const auto& [k, v] : req.params) r.query[k] = v;
    r.body = req.body;
    ApiResponse out = api.Handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  server.Get(R"(/api/.*)", forward);
  server.Post(R"(/api/.*)", forward);

  const int port = options.port == 0
                       ? server.bind_to_any_port(options.host)
                       : (server.bind_to_port(options.host, options.port)
                              ? options.port
                              : -1);
  if (port < 0) {
    throw IoError("cannot bind " + options.host + ":" + std::to_string(options.port));
  }
  std::thread watcher;
  std::atomic<bool> finished{false};
  if (options.stop != nullptr) {
    watcher = std::thread([&] {
      while (!finished.load() && !options.stop->load()) {
        std::this_thread::sleep_for(std::chrono::milliseconds(50));
      }
      server.stop();
    });
  }
  if (options.on_listen) options.on_listen(port);
  server.listen_after_bind();
  finished = true;
  if (watcher.joinable()) watcher.join();
}

}  // namespace weldx::ddia

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

#ifndef WELDX_DDIA_STORE_H_
#define WELDX_DDIA_STORE_H_

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "weldx/ddia/aggregate.h"
#include "weldx/ddia/record.h"

struct sqlite3;

namespace weldx::ddia {

struct StoredRecord {
  int64_t record_id = 0;
  AuditRecord record;
};

struct CasePage {
  std::vector<AuditCase> cases;
  int64_t total = 0;
};

// Single-file SQLite store of cases and audit records. Every record ever
// submitted is kept; readers that need one answer per (case, auditor) apply
// LatestPerAuditor. Safe to share between threads: writes run in immediate
// transactions and all statements are serialized on one connection.
class AuditStore {
 public:
  // Creates the schema on first use. ":memory:" gives a private store.
  explicit AuditStore(const std::filesystem::path& path);
  ~AuditStore();
  AuditStore(const AuditStore&) = delete;
  AuditStore& operator=(const AuditStore&) = delete;

  // Next free id of the form "case-000001".
  std::string NextCaseId();
  // Validates and inserts. ValidationError for a duplicate id.
  void InsertCase(const AuditCase& c);
  AuditCase GetCase(const std::string& case_id);  // NotFoundError
  bool HasCase(const std::string& case_id);
  // Ordered by case id. `page` is 1-based.
  CasePage ListCases(std::optional<CaseStatus> status, int64_t page,
                     int64_t page_size);
  int64_t CountCases(std::optional<CaseStatus> status);

  // Validates, appends and marks the case reviewed in one transaction.
  // NotFoundError for an unknown case.
  int64_t SubmitRecord(const AuditRecord& record);
  // Appends records verbatim (validated, case existence not required).
  void ImportRecords(const std::vector<AuditRecord>& records);

  // Full submission history in insertion order.
  std::vector<StoredRecord> History();
  std::vector<AuditRecord> LatestRecords();
  // Latest record of each auditor on one case.
  std::vector<AuditRecord> CaseRecords(const std::string& case_id);

  // Aggregate over a consistent snapshot. nullopt when no record exists.
  std::optional<AggregateReport> Report();

 private:
  void Exec(const char* sql);
  std::vector<StoredRecord> QueryRecords(const char* sql, const std::string* arg);

  sqlite3* db_ = nullptr;
  std::mutex mu_;
};

}  // namespace weldx::ddia

#endif  // WELDX_DDIA_STORE_H_

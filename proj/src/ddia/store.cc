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

#include "weldx/ddia/store.h"

#include <sqlite3.h>

#include <cstdio>

#include "weldx/common/error.h"

namespace weldx::ddia {

namespace {

bool Retryable(int rc) {
  const int primary = rc & 0xff;
  return primary == SQLITE_BUSY || primary == SQLITE_LOCKED ||
         primary == SQLITE_IOERR || primary == SQLITE_FULL;
}

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    const int rc = sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr);
    if (rc != SQLITE_OK) {
      throw StoreError(std::string("prepare failed: ") + sqlite3_errmsg(db),
                       Retryable(rc));
    }
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& Bind(int i, const std::string& v) {
    sqlite3_bind_text(stmt_, i, v.c_str(), static_cast<int>(v.size()),
                      SQLITE_TRANSIENT);
    return *this;
  }
  Statement& Bind(int i, int64_t v) {
    sqlite3_bind_int64(stmt_, i, v);
    return *this;
  }

  // True while a row is available.
  bool Step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    const int ext = sqlite3_extended_errcode(db_);
    if ((ext & 0xff) == SQLITE_CONSTRAINT) {
      throw ValidationError(std::string("constraint violated: ") +
                            sqlite3_errmsg(db_));
    }
    throw StoreError(std::string("step failed: ") + sqlite3_errmsg(db_),
                     Retryable(rc));
  }

  std::string Text(int col) const {
    const unsigned char* t = sqlite3_column_text(stmt_, col);
    return t == nullptr ? std::string()
                        : std::string(reinterpret_cast<const char*>(t),
                                      sqlite3_column_bytes(stmt_, col));
  }
  int64_t Int(int col) const { return sqlite3_column_int64(stmt_, col); }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

// Rolls back unless Commit() was reached.
class Transaction {
 public:
  Transaction(sqlite3* db, bool write) : db_(db) {
    Run(write ? "BEGIN IMMEDIATE" : "BEGIN");
  }
  ~Transaction() {
    if (!done_) sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
  }
  void Commit() {
    Run("COMMIT");
    done_ = true;
  }

 private:
  void Run(const char* sql) {
    char* err = nullptr;
    const int rc = sqlite3_exec(db_, sql, nullptr, nullptr, &err);
    if (rc != SQLITE_OK) {
      std::string msg = err ? err : "unknown";
      sqlite3_free(err);
      throw StoreError(std::string(sql) + " failed: " + msg, Retryable(rc));
    }
  }
  sqlite3* db_;
  bool done_ = false;
};

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS cases (
  case_id TEXT PRIMARY KEY,
  payload TEXT NOT NULL,
  status TEXT NOT NULL,
  created_ms INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS records (
  record_id INTEGER PRIMARY KEY AUTOINCREMENT,
  case_id TEXT NOT NULL,
  auditor_id TEXT NOT NULL,
  timestamp_ms INTEGER NOT NULL,
  payload TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS records_by_case ON records(case_id, auditor_id);
)sql";

}  // namespace

AuditStore::AuditStore(const std::filesystem::path& path) {
  const int rc = sqlite3_open_v2(
      path.string().c_str(), &db_,
      SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX, nullptr);
  if (rc != SQLITE_OK) {
    std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    db_ = nullptr;
    throw StoreError("cannot open store '" + path.string() + "': " + msg,
                     Retryable(rc));
  }
  sqlite3_busy_timeout(db_, 5000);
  if (path != ":memory:") Exec("PRAGMA journal_mode=WAL");
  Exec("PRAGMA foreign_keys=ON");
  Exec(kSchema);
}

AuditStore::~AuditStore() { sqlite3_close(db_); }

void AuditStore::Exec(const char* sql) {
  char* err = nullptr;
  const int rc = sqlite3_exec(db_, sql, nullptr, nullptr, &err);
  if (rc != SQLITE_OK) {
    std::string msg = err ? err : "unknown";
    sqlite3_free(err);
    throw StoreError("store statement failed: " + msg, Retryable(rc));
  }
}

std::string AuditStore::NextCaseId() {
  std::lock_guard lock(mu_);
  Statement s(db_, "SELECT COUNT(*) FROM cases");
  s.Step();
  int64_t n = s.Int(0) + 1;
  char buf[32];
  for (;; ++n) {
    std::snprintf(buf, sizeof(buf), "case-%06lld", static_cast<long long>(n));
    Statement q(db_, "SELECT 1 FROM cases WHERE case_id = ?");
    q.Bind(1, std::string(buf));
    if (!q.Step()) return buf;
  }
}

void AuditStore::InsertCase(const AuditCase& c) {
  ValidateCase(c);
  std::lock_guard lock(mu_);
  Transaction tx(db_, true);
  {
    Statement q(db_, "SELECT 1 FROM cases WHERE case_id = ?");
    q.Bind(1, c.case_id);
    if (q.Step()) {
      throw ValidationError("duplicate case id",
                            {{"case_id", "'" + c.case_id + "' already exists"}});
    }
  }
  Statement s(db_,
              "INSERT INTO cases(case_id, payload, status, created_ms) "
              "VALUES(?, ?, ?, ?)");
  s.Bind(1, c.case_id)
      .Bind(2, ToJson(c).dump())
      .Bind(3, std::string(Name(c.status)))
      .Bind(4, c.created_ms);
  s.Step();
  tx.Commit();
}

namespace {

AuditCase RowToCase(const Statement& s) {
  AuditCase c = CaseFromJson(Json::parse(s.Text(0)));
  c.status = *ParseCaseStatus(s.Text(1));
  return c;
}

}  // namespace

AuditCase AuditStore::GetCase(const std::string& case_id) {
  std::lock_guard lock(mu_);
  Statement s(db_, "SELECT payload, status FROM cases WHERE case_id = ?");
  s.Bind(1, case_id);
  if (!s.Step()) throw NotFoundError("no case '" + case_id + "'");
  return RowToCase(s);
}

bool AuditStore::HasCase(const std::string& case_id) {
  std::lock_guard lock(mu_);
  Statement s(db_, "SELECT 1 FROM cases WHERE case_id = ?");
  s.Bind(1, case_id);
  return s.Step();
}

CasePage AuditStore::ListCases(std::optional<CaseStatus> status, int64_t page,
                               int64_t page_size) {
  if (page < 1) throw ValidationError("page must be >= 1", {{"page", "must be >= 1"}});
  if (page_size < 1 || page_size > 1000) {
    throw ValidationError("page_size must be in 1..1000",
                          {{"page_size", "must be in 1..1000"}});
  }
  std::lock_guard lock(mu_);
  Transaction tx(db_, false);
  CasePage out;
  const std::string st = status ? std::string(Name(*status)) : std::string();
  {
    Statement c(db_, status ? "SELECT COUNT(*) FROM cases WHERE status = ?"
                            : "SELECT COUNT(*) FROM cases");
    if (status) c.Bind(1, st);
    c.Step();
    out.total = c.Int(0);
  }
  Statement s(db_, status ? "SELECT payload, status FROM cases WHERE status = ? "
                            "ORDER BY case_id LIMIT ? OFFSET ?"
                          : "SELECT payload, status FROM cases "
                            "ORDER BY case_id LIMIT ? OFFSET ?");
  int i = 1;
  if (status) s.Bind(i++, st);
  s.Bind(i, page_size);
  s.Bind(i + 1, (page - 1) * page_size);
  while (s.Step()) out.cases.push_back(RowToCase(s));
  tx.Commit();
  return out;
}

int64_t AuditStore::CountCases(std::optional<CaseStatus> status) {
  std::lock_guard lock(mu_);
  Statement c(db_, status ? "SELECT COUNT(*) FROM cases WHERE status = ?"
                          : "SELECT COUNT(*) FROM cases");
  if (status) c.Bind(1, std::string(Name(*status)));
  c.Step();
  return c.Int(0);
}

int64_t AuditStore::SubmitRecord(const AuditRecord& record) {
  ValidateRecord(record);
  std::lock_guard lock(mu_);
  Transaction tx(db_, true);
  {
    Statement q(db_, "SELECT 1 FROM cases WHERE case_id = ?");
    q.Bind(1, record.case_id);
    if (!q.Step()) throw NotFoundError("no case '" + record.case_id + "'");
  }
  {
    Statement s(db_,
                "INSERT INTO records(case_id, auditor_id, timestamp_ms, payload) "
                "VALUES(?, ?, ?, ?)");
    s.Bind(1, record.case_id)
        .Bind(2, record.auditor_id)
        .Bind(3, record.timestamp_ms)
        .Bind(4, ToJson(record).dump());
    s.Step();
  }
  const int64_t id = sqlite3_last_insert_rowid(db_);
  {
    Statement u(db_, "UPDATE cases SET status = 'reviewed' WHERE case_id = ?");
    u.Bind(1, record.case_id);
    u.Step();
  }
  tx.Commit();
  return id;
}

void AuditStore::ImportRecords(const std::vector<AuditRecord>& records) {
  for (const AuditRecord& r : records) ValidateRecord(r);
  std::lock_guard lock(mu_);
  Transaction tx(db_, true);
  for (const AuditRecord& r : records) {
    Statement s(db_,
                "INSERT INTO records(case_id, auditor_id, timestamp_ms, payload) "
                "VALUES(?, ?, ?, ?)");
    s.Bind(1, r.case_id).Bind(2, r.auditor_id).Bind(3, r.timestamp_ms).Bind(
        4, ToJson(r).dump());
    s.Step();
    Statement u(db_, "UPDATE cases SET status = 'reviewed' WHERE case_id = ?");
    u.Bind(1, r.case_id);
    u.Step();
  }
  tx.Commit();
}

std::vector<StoredRecord> AuditStore::QueryRecords(const char* sql,
                                                   const std::string* arg) {
  std::vector<StoredRecord> out;
  Statement s(db_, sql);
  if (arg != nullptr) s.Bind(1, *arg);
  while (s.Step()) {
    out.push_back({s.Int(0), RecordFromJson(Json::parse(s.Text(1)))});
  }
  return out;
}

std::vector<StoredRecord> AuditStore::History() {
  std::lock_guard lock(mu_);
  return QueryRecords("SELECT record_id, payload FROM records ORDER BY record_id",
                      nullptr);
}

namespace {

std::vector<AuditRecord> Latest(const std::vector<StoredRecord>& rows) {
  std::vector<AuditRecord> plain;
  plain.reserve(rows.size());
  for (const StoredRecord& r : rows) plain.push_back(r.record);
  return LatestPerAuditor(plain);
}

}  // namespace

std::vector<AuditRecord> AuditStore::LatestRecords() {
  return Latest(History());
}

std::vector<AuditRecord> AuditStore::CaseRecords(const std::string& case_id) {
  std::lock_guard lock(mu_);
  return Latest(QueryRecords(
      "SELECT record_id, payload FROM records WHERE case_id = ? ORDER BY record_id",
      &case_id));
}

std::optional<AggregateReport> AuditStore::Report() {
  const std::vector<StoredRecord> rows = History();
  if (rows.empty()) return std::nullopt;
  std::vector<AuditRecord> plain;
  plain.reserve(rows.size());
  for (const StoredRecord& r : rows) plain.push_back(r.record);
  return Aggregate(plain);
}

}  // namespace weldx::ddia

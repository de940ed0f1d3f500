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

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <map>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "support/ddia_fixtures.h"
#include "weldx/common/error.h"
#include "weldx/ddia/aggregate.h"
#include "weldx/ddia/api.h"
#include "weldx/ddia/record.h"
#include "weldx/ddia/store.h"

namespace weldx::ddia {
namespace {

namespace fs = std::filesystem;
using testing::CaseId;
using testing::RandomRecord;

AuditRecord ValidRecord() {
  AuditRecord r;
  r.case_id = "case-000001";
  r.auditor_id = "ndt-l2-01";
  r.detected_gradcam = true;
  r.visibility_gradcam = Visibility::kClearlyVisible;
  r.confidence_gradcam = 4;
  r.confidence_lime = 2;
  r.timestamp_ms = 1760000000000;
  return r;
}

AuditCase MakeCase(const std::string& id) {
  AuditCase c;
  c.case_id = id;
  c.image_path = id + "/image.png";
  c.prediction = {0, "crack", {0.7, 0.1, 0.1, 0.1}};
  c.gradcam_overlay_path = id + "/gradcam.png";
  c.lime_overlay_path = id + "/lime.png";
  c.created_ms = 1760000000000;
  return c;
}

bool HasField(const ValidationError& e, const std::string& field) {
  for (const FieldError& f : e.fields()) {
    if (f.field == field) return true;
  }
  return false;
}

TEST(RecordTest, ValidRecordPasses) { EXPECT_TRUE(CheckRecord(ValidRecord()).empty()); }

TEST(RecordTest, ConfidenceOutOfRangeIsFieldError) {
  AuditRecord r = ValidRecord();
  r.confidence_lime = 0;
  r.confidence_gradcam = 6;
  try {
    ValidateRecord(r);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_TRUE(HasField(e, "confidence_lime"));
    EXPECT_TRUE(HasField(e, "confidence_gradcam"));
  }
}

TEST(RecordTest, UndetectedMustBeNotVisible) {
  AuditRecord r = ValidRecord();
  r.detected_gradcam = false;
  try {
    ValidateRecord(r);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_TRUE(HasField(e, "visibility_gradcam"));
  }
}

TEST(RecordTest, JsonRoundTrip) {
  const AuditRecord r = ValidRecord();
  EXPECT_EQ(RecordFromJson(ToJson(r)), r);
}

TEST(RecordTest, JsonCollectsEveryBadField) {
  Json j = ToJson(ValidRecord());
  j["confidence_lime"] = 2.5;
  j["image_quality"] = "blurry";
  j.erase("auditor_id");
  j["colour"] = "red";
  try {
    RecordFromJson(j);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_TRUE(HasField(e, "confidence_lime"));
    EXPECT_TRUE(HasField(e, "image_quality"));
    EXPECT_TRUE(HasField(e, "auditor_id"));
    EXPECT_TRUE(HasField(e, "colour"));
  }
}

TEST(RecordTest, MissingTimestampUsesDefault) {
  Json j = ToJson(ValidRecord());
  j.erase("timestamp");
  EXPECT_THROW(RecordFromJson(j), ValidationError);
  EXPECT_EQ(RecordFromJson(j, 5).timestamp_ms, 5);
}

TEST(CaseTest, ProbabilitiesMustSumToOne) {
  AuditCase c = MakeCase("case-000001");
  EXPECT_NO_THROW(ValidateCase(c));
  c.prediction.probabilities = {0.5, 0.4, 0.0, 0.0};
  EXPECT_THROW(ValidateCase(c), ValidationError);
  c = MakeCase("case-000001");
  EXPECT_THROW(ValidateCase(c, std::string("/nonexistent")), ValidationError);
  EXPECT_EQ(CaseFromJson(ToJson(c)), c);
}

TEST(LatestTest, LatestTimestampWinsPerAuditor) {
  AuditRecord a = ValidRecord();
  AuditRecord b = a;
  b.timestamp_ms += 1000;
  b.confidence_lime = 5;
  AuditRecord other = a;
  other.auditor_id = "ndt-l2-02";
  const std::vector<AuditRecord> latest = LatestPerAuditor({{b, a, other}});
  ASSERT_EQ(latest.size(), 2u);
  EXPECT_EQ(latest[0].confidence_lime, 5);
  EXPECT_EQ(latest[1].auditor_id, "ndt-l2-02");
}

TEST(LatestTest, TimestampTieIsOrderIndependent) {
  AuditRecord a = ValidRecord();
  AuditRecord b = a;
  b.confidence_gradcam = 1;
  EXPECT_EQ(LatestPerAuditor({{a, b}}), LatestPerAuditor({{b, a}}));
}

// Independent tally: deduplicate by scanning, then count with plain loops.
struct Tally {
  int64_t n = 0;
  int64_t quality[4] = {};
  int64_t detected[2] = {};
  int64_t hist[2][5] = {};
  double conf_sum[2] = {};
  int64_t by_quality[4][2] = {};
};

Tally BruteForce(const std::vector<AuditRecord>& records) {
  std::vector<AuditRecord> kept;
  for (const AuditRecord& r : records) {
    bool superseded = false;
    for (const AuditRecord& s : records) {
      if (s.case_id != r.case_id || s.auditor_id != r.auditor_id) continue;
      if (s.timestamp_ms > r.timestamp_ms ||
          (s.timestamp_ms == r.timestamp_ms && ToJson(s).dump() > ToJson(r).dump())) {
        superseded = true;
      }
    }
    bool dup = false;
    for (const AuditRecord& k : kept) dup |= k == r;
    if (!superseded && !dup) kept.push_back(r);
  }
  Tally t;
  for (const AuditRecord& r : kept) {
    ++t.n;
    const int q = static_cast<int>(r.image_quality);
    ++t.quality[q];
    const bool det[2] = {r.detected_gradcam, r.detected_lime};
    const int conf[2] = {r.confidence_gradcam, r.confidence_lime};
    for (int x = 0; x < 2; ++x) {
      t.detected[x] += det[x];
      t.by_quality[q][x] += det[x];
      ++t.hist[x][conf[x] - 1];
      t.conf_sum[x] += conf[x];
    }
  }
  return t;
}

void ExpectMatchesTally(const AggregateReport& rep, const Tally& t) {
  ASSERT_EQ(rep.record_count, t.n);
  double qsum = 0.0;
  for (int q = 0; q < 4; ++q) {
    EXPECT_EQ(rep.quality_counts[q], t.quality[q]);
    EXPECT_DOUBLE_EQ(rep.quality_distribution[q], static_cast<double>(t.quality[q]) / t.n);
    qsum += rep.quality_distribution[q];
    for (int x = 0; x < 2; ++x) {
      EXPECT_EQ(rep.detected_by_quality[q][x], t.by_quality[q][x]);
      const double rate =
          t.quality[q] == 0 ? 0.0 : static_cast<double>(t.by_quality[q][x]) / t.quality[q];
      EXPECT_DOUBLE_EQ(rep.detection_rate_by_quality[q][x], rate);
    }
  }
  EXPECT_NEAR(qsum, 1.0, 1e-9);
  for (int x = 0; x < 2; ++x) {
    EXPECT_EQ(rep.detected_counts[x], t.detected[x]);
    EXPECT_EQ(rep.detected_counts[x] + rep.undetected_counts[x], t.n);
    EXPECT_DOUBLE_EQ(rep.detection_rate[x], static_cast<double>(t.detected[x]) / t.n);
    EXPECT_DOUBLE_EQ(rep.mean_confidence[x], t.conf_sum[x] / t.n);
    int64_t hsum = 0;
    for (int k = 0; k < 5; ++k) {
      EXPECT_EQ(rep.confidence_histogram[x][k], t.hist[x][k]);
      hsum += rep.confidence_histogram[x][k];
    }
    EXPECT_EQ(hsum, t.n);
  }
}

TEST(AggregateTest, MatchesBruteForceOnRandomRecords) {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    std::vector<AuditRecord> records;
    for (int i = 0; i < 100; ++i) {
      // Few cases and auditors so duplicates and resubmissions occur.
      records.push_back(RandomRecord(rng, CaseId(1 + rng.Below(40)),
                                     "aud-" + std::to_string(rng.Below(3))));
      if (rng.Bernoulli(0.1)) {
        AuditRecord tie = records.back();
        tie.confidence_lime = 1 + static_cast<int>(rng.Below(5));
        records.push_back(tie);
      }
    }
    ExpectMatchesTally(Aggregate(records), BruteForce(records));
  }
}

TEST(AggregateTest, QualityFixtureDistribution) {
  const AggregateReport rep = Aggregate(testing::QualityFixture300(1));
  EXPECT_EQ(rep.record_count, 300);
  EXPECT_NEAR(100 * rep.quality_distribution[static_cast<int>(ImageQuality::kNoisy)], 14.7, 0.1);
  EXPECT_NEAR(100 * rep.quality_distribution[static_cast<int>(ImageQuality::kOverexposed)],
              21.7, 0.1);
  EXPECT_NEAR(100 * rep.quality_distribution[static_cast<int>(ImageQuality::kUnderexposed)],
              26.3, 0.1);
  EXPECT_NEAR(100 * rep.quality_distribution[static_cast<int>(ImageQuality::kClear)], 37.3, 0.1);
}

TEST(AggregateTest, SingleRecordIsDegenerate) {
  AuditRecord r = ValidRecord();
  r.image_quality = ImageQuality::kNoisy;
  const AggregateReport rep = Aggregate({{r}});
  EXPECT_EQ(rep.quality_distribution[static_cast<int>(ImageQuality::kNoisy)], 1.0);
  EXPECT_THROW(Aggregate(std::vector<AuditRecord>{}), ValidationError);
}

TEST(AggregateTest, IdempotentAndPermutationInvariant) {
  Rng rng(77);
  std::vector<AuditRecord> records;
  for (int i = 0; i < 80; ++i) {
    records.push_back(RandomRecord(rng, CaseId(1 + rng.Below(20)), "a" + std::to_string(rng.Below(2))));
  }
  const AggregateReport first = Aggregate(records);
  EXPECT_EQ(Aggregate(records), first);
  for (int k = 0; k < 10; ++k) {
    rng.Shuffle(records);
    EXPECT_EQ(Aggregate(records), first);
  }
  EXPECT_EQ(ToJson(Aggregate(records)).dump(), ToJson(first).dump());
}

class StoreTest : public ::testing::Test {
 protected:
  StoreTest() : store_(":memory:") {}
  AuditStore store_;
};

TEST_F(StoreTest, CaseLifecycle) {
  for (int i = 1; i <= 3; ++i) store_.InsertCase(MakeCase(store_.NextCaseId()));
  EXPECT_EQ(store_.CountCases(CaseStatus::kPending), 3);
  EXPECT_THROW(store_.InsertCase(MakeCase("case-000001")), ValidationError);
  AuditRecord r = ValidRecord();
  r.case_id = "case-000002";
  EXPECT_GT(store_.SubmitRecord(r), 0);
  EXPECT_EQ(store_.CountCases(CaseStatus::kPending), 2);
  EXPECT_EQ(store_.GetCase("case-000002").status, CaseStatus::kReviewed);
  EXPECT_THROW(store_.GetCase("case-000009"), NotFoundError);
}

TEST_F(StoreTest, SubmitToUnknownCaseIsNotFound) {
  EXPECT_THROW(store_.SubmitRecord(ValidRecord()), NotFoundError);
  EXPECT_TRUE(store_.History().empty());
}

TEST_F(StoreTest, ResubmissionKeepsHistoryButCountsOnce) {
  store_.InsertCase(MakeCase("case-000001"));
  AuditRecord r = ValidRecord();
  store_.SubmitRecord(r);
  r.timestamp_ms += 60000;
  r.confidence_gradcam = 1;
  store_.SubmitRecord(r);
  EXPECT_EQ(store_.History().size(), 2u);
  ASSERT_EQ(store_.CaseRecords("case-000001").size(), 1u);
  EXPECT_EQ(store_.CaseRecords("case-000001")[0].confidence_gradcam, 1);
  EXPECT_EQ(store_.Report()->record_count, 1);
}

TEST_F(StoreTest, PaginationCoversAllCases) {
  for (int i = 1; i <= 7; ++i) store_.InsertCase(MakeCase(CaseId(i)));
  const CasePage p1 = store_.ListCases(CaseStatus::kPending, 1, 3);
  const CasePage p3 = store_.ListCases(CaseStatus::kPending, 3, 3);
  EXPECT_EQ(p1.total, 7);
  EXPECT_EQ(p1.cases.size(), 3u);
  EXPECT_EQ(p1.cases[0].case_id, "case-000001");
  ASSERT_EQ(p3.cases.size(), 1u);
  EXPECT_EQ(p3.cases[0].case_id, "case-000007");
  EXPECT_THROW(store_.ListCases(std::nullopt, 0, 3), ValidationError);
}

TEST(StorePersistenceTest, ExportImportPreservesAggregate) {
  const fs::path a = fs::temp_directory_path() / "weldx_store_a.db";
  const fs::path b = fs::temp_directory_path() / "weldx_store_b.db";
  fs::remove(a);
  fs::remove(b);
  std::vector<AuditRecord> exported;
  AggregateReport original;
  {
    AuditStore store(a);
    Rng rng(4);
    for (int i = 1; i <= 30; ++i) store.InsertCase(MakeCase(CaseId(i)));
    for (int i = 0; i < 60; ++i) {
      store.SubmitRecord(RandomRecord(rng, CaseId(1 + rng.Below(30)), "a" + std::to_string(rng.Below(2))));
    }
    original = *store.Report();
    for (const StoredRecord& s : store.History()) exported.push_back(s.record);
  }
  {
    AuditStore reopened(a);
    EXPECT_EQ(*reopened.Report(), original);
  }
  AuditStore fresh(b);
  fresh.ImportRecords(exported);
  EXPECT_EQ(*fresh.Report(), original);
  fs::remove(a);
  fs::remove(b);
}

class ApiTest : public ::testing::Test {
 protected:
  ApiTest() : store_(":memory:"), api_(store_, [] { return int64_t{1760000000000}; }) {
    for (int i = 1; i <= 3; ++i) store_.InsertCase(MakeCase(CaseId(i)));
  }
  ApiResponse Get(const std::string& path, std::map<std::string, std::string> q = {}) {
    return api_.Handle({"GET", path, std::move(q), ""});
  }
  ApiResponse Post(const std::string& path, const std::string& body) {
    return api_.Handle({"POST", path, {}, body});
  }
  static std::string Body(AuditRecord r) {
    Json j = ToJson(r);
    j.erase("case_id");
    j.erase("timestamp");
    return j.dump();
  }
  AuditStore store_;
  AuditApi api_;
};

TEST_F(ApiTest, PendingQueueShrinksAfterReview) {
  ASSERT_EQ(Post("/api/cases/case-000002/records", Body(ValidRecord())).status, 201);
  const ApiResponse r = Get("/api/cases", {{"status", "pending"}});
  ASSERT_EQ(r.status, 200);
  const Json j = Json::parse(r.body);
  EXPECT_EQ(j["total"], 2);
  EXPECT_EQ(j["cases"].size(), 2u);
  EXPECT_EQ(j["cases"][0]["gradcam_overlay_url"], "/artifacts/case-000001/gradcam.png");
}

TEST_F(ApiTest, ReportReadsYourWrites) {
  EXPECT_EQ(Json::parse(Get("/api/report").body)["record_count"], 0);
  Post("/api/cases/case-000001/records", Body(ValidRecord()));
  const Json rep = Json::parse(Get("/api/report").body);
  EXPECT_EQ(rep["record_count"], 1);
  EXPECT_EQ(rep["confidence_histogram"]["gradcam"][3], 1);
}

TEST_F(ApiTest, CaseDetailListsRecordsPerAuditor) {
  AuditRecord a = ValidRecord();
  Post("/api/cases/case-000001/records", Body(a));
  a.auditor_id = "ndt-l2-02";
  Post("/api/cases/case-000001/records", Body(a));
  const Json j = Json::parse(Get("/api/cases/case-000001").body);
  EXPECT_EQ(j["status"], "reviewed");
  EXPECT_EQ(j["records"].size(), 2u);
}

TEST_F(ApiTest, ValidationErrorsAreFieldLevel400) {
  AuditRecord r = ValidRecord();
  r.confidence_lime = 6;
  const ApiResponse bad = Post("/api/cases/case-000001/records", Body(r));
  EXPECT_EQ(bad.status, 400);
  const Json err = Json::parse(bad.body)["error"];
  EXPECT_EQ(err["fields"][0]["field"], "confidence_lime");
  EXPECT_FALSE(err["retryable"].get<bool>());
  EXPECT_EQ(Post("/api/cases/case-000001/records", "{not json").status, 400);
  Json mismatched = ToJson(ValidRecord());
  mismatched["case_id"] = "case-000003";
  EXPECT_EQ(Post("/api/cases/case-000001/records", mismatched.dump()).status, 400);
}

TEST_F(ApiTest, UnknownCaseAndRouteAre404) {
  EXPECT_EQ(Get("/api/cases/case-000099").status, 404);
  EXPECT_EQ(Post("/api/cases/case-000099/records", Body(ValidRecord())).status, 404);
  EXPECT_EQ(Get("/api/nothing").status, 404);
  EXPECT_EQ(Get("/api/cases", {{"page", "x"}}).status, 400);
}

TEST_F(ApiTest, ExportIsOneLinePerSubmission) {
  Post("/api/cases/case-000001/records", Body(ValidRecord()));
  Post("/api/cases/case-000001/records", Body(ValidRecord()));
  const ApiResponse r = Get("/api/records/export");
  EXPECT_EQ(std::count(r.body.begin(), r.body.end(), '\n'), 2);
}

TEST_F(ApiTest, ConcurrentAuditorsOnOneCaseAreBothKept) {
  std::vector<std::thread> threads;
  std::atomic<int> created{0};
  for (int t = 0; t < 2; ++t) {
    threads.emplace_back([&, t] {
      for (int k = 0; k < 20; ++k) {
        AuditRecord r = ValidRecord();
        r.auditor_id = "auditor-" + std::to_string(t);
        created += Post("/api/cases/case-000001/records", Body(r)).status == 201;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(created.load(), 40);
  EXPECT_EQ(store_.History().size(), 40u);
  EXPECT_EQ(store_.CaseRecords("case-000001").size(), 2u);
  EXPECT_EQ(store_.Report()->record_count, 2);
}

TEST(HttpTest, ServesApiAndArtifactsOverLoopback) {
  const fs::path root = fs::temp_directory_path() / "weldx_http_artifacts";
  fs::create_directories(root / "case-000001");
  WriteFileBytes(root / "case-000001" / "gradcam.png", "PNGDATA");
  AuditStore store(":memory:");
  store.InsertCase(MakeCase("case-000001"));
  AuditApi api(store);
  std::atomic<bool> stop{false};
  std::atomic<int> port{0};
  ServeOptions opts;
  opts.port = 0;
  opts.artifact_root = root;
  opts.stop = &stop;
  opts.on_listen = [&](int p) { port = p; };
  std::thread server([&] { Serve(api, opts); });
  while (port == 0) std::this_thread::sleep_for(std::chrono::milliseconds(10));

  httplib::Client client("127.0.0.1", port);
  auto cases = client.Get("/api/cases?status=pending");
  ASSERT_TRUE(cases);
  EXPECT_EQ(cases->status, 200);
  EXPECT_EQ(Json::parse(cases->body)["total"], 1);
  Json body = ToJson(ValidRecord());
  auto posted = client.Post("/api/cases/case-000001/records", body.dump(), "application/json");
  ASSERT_TRUE(posted);
  EXPECT_EQ(posted->status, 201);
  auto art = client.Get("/artifacts/case-000001/gradcam.png");
  ASSERT_TRUE(art);
  EXPECT_EQ(art->body, "PNGDATA");

  stop = true;
  server.join();
  fs::remove_all(root);
}

}  // namespace
}  // namespace weldx::ddia

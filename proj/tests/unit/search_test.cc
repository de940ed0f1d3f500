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

#include <atomic>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "support/synthetic_objective.h"
#include "weldx/common/error.h"
#include "weldx/common/jsonl.h"
#include "weldx/search/sampler.h"
#include "weldx/search/space.h"
#include "weldx/search/study.h"

namespace weldx::search {
namespace {

namespace fs = std::filesystem;

Clock ZeroClock() {
  return [] { return 0.0; };
}

StudyOptions Options(int n, SamplerKind sampler, uint64_t seed) {
  StudyOptions o;
  o.n_trials = n;
  o.sampler = sampler;
  o.study_seed = seed;
  o.clock = ZeroClock();
  return o;
}

fs::path TempFile(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("weldx_" + name);
  fs::remove(p);
  return p;
}

TEST(SearchSpaceTest, DefaultsAreValid) {
  SearchSpace s;
  EXPECT_NO_THROW(s.Validate());
  EXPECT_EQ(s.architectures.size(), 8u);
  EXPECT_EQ(s.modes.size(), 3u);
  EXPECT_EQ(s.optimizers.size(), 7u);
}

TEST(SearchSpaceTest, RejectsEmptyAndDuplicateSets) {
  SearchSpace s;
  s.architectures.clear();
  EXPECT_THROW(s.Validate(), ValidationError);
  s = SearchSpace{};
  s.batch_sizes = {16, 16};
  EXPECT_THROW(s.Validate(), ValidationError);
  s = SearchSpace{};
  s.lr_min = 1e-2;
  s.lr_max = 1e-3;
  EXPECT_THROW(s.Validate(), ValidationError);
}

TEST(SearchSpaceTest, JsonRejectsUnknownKeys) {
  Json j = ToJson(SearchSpace{});
  EXPECT_NO_THROW(SearchSpaceFromJson(j));
  j["learning_rate"] = 1;
  EXPECT_THROW(SearchSpaceFromJson(j), ConfigError);
}

TEST(SamplerTest, RandomDrawIsDeterministicAndInBounds) {
  const SearchSpace space;
  for (int64_t id = 1; id <= 200; ++id) {
    const TrialConfig a = SampleConfig(space, {}, SamplerKind::kRandom, id, 9);
    const TrialConfig b = SampleConfig(space, {}, SamplerKind::kRandom, id, 9);
    EXPECT_EQ(a, b);
    EXPECT_TRUE(Contains(space, a));
    EXPECT_GE(a.lr, 1e-5);
    EXPECT_LE(a.lr, 1e-2);
    EXPECT_EQ(a.trial_id, id);
    EXPECT_EQ(a.seed, TrialSeed(9, id));
  }
}

TEST(SamplerTest, RandomDrawIsRoughlyUniform) {
  const SearchSpace space;
  std::map<ArchitectureId, int> counts;
  for (int64_t id = 1; id <= 4000; ++id) {
    ++counts[SampleConfig(space, {}, SamplerKind::kRandom, id, 1).arch];
  }
  for (const auto& [arch, n] : counts) EXPECT_NEAR(n, 500, 100);
}

TEST(SamplerTest, AdaptiveMatchesRandomDuringStartup) {
  const SearchSpace space;
  std::vector<StudyEntry> history;
  for (int64_t id = 1; id <= 9; ++id) {
    const TrialConfig r = SampleConfig(space, history, SamplerKind::kRandom, id, 4);
    const TrialConfig a = SampleConfig(space, history, SamplerKind::kAdaptive, id, 4);
    EXPECT_EQ(r, a);
    history.push_back({a, {testing::SyntheticObjective(a)}});
  }
}

TEST(SamplerTest, AdaptiveFavoursDominantArchitecture) {
  const SearchSpace space;
  std::vector<StudyEntry> history;
  for (int64_t id = 1; id <= 40; ++id) {
    TrialConfig c = SampleConfig(space, {}, SamplerKind::kRandom, id, 17);
    TrialResult r;
    r.objective = c.arch == ArchitectureId::kDensenet121 ? 0.95 : 0.5;
    history.push_back({c, r});
  }
  int densenet = 0;
  for (int64_t id = 41; id <= 140; ++id) {
    densenet += SampleConfig(space, history, SamplerKind::kAdaptive, id, 17).arch ==
                ArchitectureId::kDensenet121;
  }
  EXPECT_GT(densenet, 100 / 8);
}

TEST(ParzenEstimatorTest, DensityIntegratesToOne) {
  const std::vector<double> obs = {-9.0, -8.5, -6.0};
  const double lo = std::log(1e-5), hi = std::log(1e-2);
  ParzenEstimator pe(obs, lo, hi, 1.0);
  const int n = 20000;
  double integral = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * (i + 0.5) / n;
    integral += std::exp(pe.LogPdf(x)) * (hi - lo) / n;
  }
  EXPECT_NEAR(integral, 1.0, 1e-3);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const double x = pe.Sample(rng);
    EXPECT_GE(x, lo);
    EXPECT_LE(x, hi);
  }
}

TEST(StudyTest, RunsRequestedTrialsWithSequentialIds) {
  const StudyLog log = RunStudy(SearchSpace{}, testing::SyntheticReport,
                                Options(25, SamplerKind::kRandom, 3));
  ASSERT_EQ(log.trials.size(), 25u);
  for (size_t i = 0; i < log.trials.size(); ++i) {
    EXPECT_EQ(log.trials[i].config.trial_id, static_cast<int64_t>(i + 1));
  }
  EXPECT_NO_THROW(log.Validate());
}

TEST(StudyTest, RandomBestSoFarIsNondecreasing) {
  const StudyLog log = RunStudy(SearchSpace{}, testing::SyntheticReport,
                                Options(60, SamplerKind::kRandom, 12));
  double best = 0.0;
  for (const StudyEntry& e : log.trials) {
    const double next = std::max(best, e.result.objective);
    EXPECT_GE(next, best);
    best = next;
  }
  EXPECT_EQ(best, BestTrial(log).result.objective);
}

TEST(StudyTest, FailingTrialRecordsZeroObjective) {
  int calls = 0;
  TrialRunner runner = [&](const TrialConfig& c) -> TrainReport {
    if (++calls == 2) throw NonFiniteLossError("loss became NaN at epoch 3");
    return testing::SyntheticReport(c);
  };
  const StudyLog log = RunStudy(SearchSpace{}, runner, Options(3, SamplerKind::kRandom, 1));
  ASSERT_EQ(log.trials.size(), 3u);
  const TrialResult& failed = log.trials[1].result;
  EXPECT_EQ(failed.status, TrialStatus::kFailed);
  EXPECT_EQ(failed.objective, 0.0);
  EXPECT_NE(failed.diagnostic.find("NaN"), std::string::npos);
  EXPECT_EQ(log.trials[2].result.status, TrialStatus::kCompleted);
}

TEST(StudyTest, BestTrialBreaksTiesByLowestId) {
  StudyLog log;
  for (int64_t id = 1; id <= 3; ++id) {
    StudyEntry e;
    e.config.trial_id = id;
    e.result.objective = id == 1 ? 0.5 : 0.8;
    log.trials.push_back(e);
  }
  EXPECT_EQ(BestTrial(log).config.trial_id, 2);
}

TEST(StudyTest, AllFailedIsNoResult) {
  StudyLog log;
  StudyEntry e;
  e.config.trial_id = 1;
  e.result.status = TrialStatus::kFailed;
  log.trials.push_back(e);
  EXPECT_THROW(BestTrial(log), NoResultError);
}

TEST(StudyTest, ResumedStudyMatchesUninterruptedRun) {
  const fs::path full = TempFile("study_full.jsonl");
  const fs::path part = TempFile("study_part.jsonl");
  StudyOptions o = Options(20, SamplerKind::kAdaptive, 5);
  o.log_path = full;
  RunStudy(SearchSpace{}, testing::SyntheticReport, o);

  StudyOptions first = Options(8, SamplerKind::kAdaptive, 5);
  first.log_path = part;
  RunStudy(SearchSpace{}, testing::SyntheticReport, first);
  StudyOptions rest = Options(20, SamplerKind::kAdaptive, 5);
  rest.log_path = part;
  RunStudy(SearchSpace{}, testing::SyntheticReport, rest);

  EXPECT_EQ(ReadFileBytes(full), ReadFileBytes(part));
  fs::remove(full);
  fs::remove(part);
}

TEST(StudyTest, ResumeRejectsDifferentSeed) {
  const fs::path file = TempFile("study_seed.jsonl");
  StudyOptions o = Options(2, SamplerKind::kRandom, 5);
  o.log_path = file;
  RunStudy(SearchSpace{}, testing::SyntheticReport, o);
  o.study_seed = 6;
  o.n_trials = 4;
  EXPECT_THROW(RunStudy(SearchSpace{}, testing::SyntheticReport, o), ConfigError);
  fs::remove(file);
}

TEST(StudyTest, StopFlagInterruptsAfterFlushing) {
  const fs::path file = TempFile("study_stop.jsonl");
  std::atomic<bool> stop{false};
  StudyOptions o = Options(10, SamplerKind::kRandom, 8);
  o.log_path = file;
  o.stop = &stop;
  o.on_trial = [&](const StudyEntry& e) {
    if (e.config.trial_id == 4) stop = true;
  };
  EXPECT_THROW(RunStudy(SearchSpace{}, testing::SyntheticReport, o), StudyInterrupted);
  EXPECT_EQ(ReadStudyLog(file).trials.size(), 4u);
  o.stop = nullptr;
  o.on_trial = nullptr;
  EXPECT_EQ(RunStudy(SearchSpace{}, testing::SyntheticReport, o).trials.size(), 10u);
  fs::remove(file);
}

TEST(StudyTest, ParallelWorkersKeepLogOrdered) {
  const fs::path file = TempFile("study_parallel.jsonl");
  StudyOptions o = Options(12, SamplerKind::kAdaptive, 2);
  o.log_path = file;
  o.workers = 3;
  const StudyLog log = RunStudy(SearchSpace{}, testing::SyntheticReport, o);
  const StudyLog read = ReadStudyLog(file);
  ASSERT_EQ(read.trials.size(), 12u);
  for (size_t i = 0; i < 12; ++i) {
    EXPECT_EQ(read.trials[i].config.trial_id, static_cast<int64_t>(i + 1));
  }
  EXPECT_EQ(read.trials, log.trials);
  fs::remove(file);
}

TEST(StudyTest, LogRoundTripsThroughJson) {
  const StudyLog log = RunStudy(SearchSpace{}, testing::SyntheticReport,
                                Options(5, SamplerKind::kAdaptive, 33));
  const fs::path file = TempFile("study_rt.jsonl");
  WriteStudyLog(log, file);
  const StudyLog read = ReadStudyLog(file);
  EXPECT_EQ(read.trials, log.trials);
  EXPECT_EQ(read.study_seed, 33u);
  EXPECT_EQ(read.sampler, SamplerKind::kAdaptive);
  fs::remove(file);
}

TEST(StudyTest, AdaptiveFindsSyntheticOptimum) {
  int found = 0;
  for (uint64_t seed = 101; seed <= 110; ++seed) {
    const StudyLog log = RunStudy(SearchSpace{}, testing::SyntheticReport,
                                  Options(60, SamplerKind::kAdaptive, seed));
    found += testing::IsSyntheticOptimum(BestTrial(log).config);
  }
  EXPECT_GE(found, 9);
}

}  // namespace
}  // namespace weldx::search

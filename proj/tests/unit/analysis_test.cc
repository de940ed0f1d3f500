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

#include <filesystem>

#include <gtest/gtest.h>

#include "weldx/common/error.h"
#include "weldx/common/jsonl.h"
#include "weldx/search/analysis.h"

namespace weldx::search {
namespace {

TEST(QuantileTest, HandComputedValues) {
  const std::vector<double> v = {9, 1, 8, 2, 7, 3, 6, 4, 5, 100};
  EXPECT_DOUBLE_EQ(Quantile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(Quantile(v, 0.25), 3.25);
  EXPECT_DOUBLE_EQ(Quantile(v, 0.5), 5.5);
  EXPECT_DOUBLE_EQ(Quantile(v, 0.75), 7.75);
  EXPECT_DOUBLE_EQ(Quantile(v, 1.0), 100.0);
}

TEST(BoxStatsTest, TukeyWhiskersAndOutliers) {
  const std::vector<double> v = {9, 1, 8, 2, 7, 3, 6, 4, 5, 100};
  const BoxStats b = ComputeBoxStats(v);
  EXPECT_EQ(b.count, 10);
  EXPECT_DOUBLE_EQ(b.q1, 3.25);
  EXPECT_DOUBLE_EQ(b.median, 5.5);
  EXPECT_DOUBLE_EQ(b.q3, 7.75);
  // Fences at 3.25 - 6.75 and 7.75 + 6.75.
  EXPECT_DOUBLE_EQ(b.whisker_low, 1.0);
  EXPECT_DOUBLE_EQ(b.whisker_high, 9.0);
  ASSERT_EQ(b.outliers.size(), 1u);
  EXPECT_DOUBLE_EQ(b.outliers[0], 100.0);
  EXPECT_DOUBLE_EQ(b.max, 100.0);
}

TEST(BoxStatsTest, SingleValueAndEmpty) {
  const std::vector<double> one = {0.7};
  const BoxStats b = ComputeBoxStats(one);
  EXPECT_DOUBLE_EQ(b.q1, 0.7);
  EXPECT_DOUBLE_EQ(b.q3, 0.7);
  EXPECT_TRUE(b.outliers.empty());
  EXPECT_THROW(ComputeBoxStats(std::vector<double>{}), ValidationError);
}

StudyLog SmallLog() {
  StudyLog log;
  const TransferMode modes[] = {TransferMode::kFreezeAll, TransferMode::kFineTuneAll,
                                TransferMode::kFineTuneAll};
  const double objectives[] = {0.4, 0.9, 0.8};
  for (int i = 0; i < 3; ++i) {
    StudyEntry e;
    e.config.trial_id = i + 1;
    e.config.mode = modes[i];
    e.config.lr = 1e-3;
    e.result.objective = objectives[i];
    log.trials.push_back(e);
  }
  return log;
}

TEST(AnalysisTest, TablesCoverEveryTrial) {
  const AnalysisTables t = ExportAnalysis(SmallLog());
  EXPECT_EQ(t.parallel_coords.header.size(), 6u);
  EXPECT_EQ(t.parallel_coords.rows.size(), 3u);
  EXPECT_EQ(t.mode_boxplot.rows.size(), 2u);
  ASSERT_TRUE(t.scatter.count("lr"));
  EXPECT_EQ(t.scatter.at("lr").rows.size(), 3u);
  EXPECT_THROW(ExportAnalysis(StudyLog{}), ValidationError);
}

TEST(AnalysisTest, WritesCsvFiles) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "weldx_analysis";
  fs::remove_all(dir);
  WriteAnalysis(ExportAnalysis(SmallLog()), dir);
  EXPECT_TRUE(fs::exists(dir / "parallel_coords.csv"));
  EXPECT_TRUE(fs::exists(dir / "mode_boxplot.csv"));
  EXPECT_TRUE(fs::exists(dir / "scatter_arch.csv"));
  const std::string csv = ReadFileBytes(dir / "parallel_coords.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "batch_size,lr,mode,arch,opt,objective");
  fs::remove_all(dir);
}

}  // namespace
}  // namespace weldx::search

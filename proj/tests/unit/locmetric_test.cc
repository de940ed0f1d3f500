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
#include <opencv2/imgcodecs.hpp>

#include "weldx/common/error.h"
#include "weldx/common/jsonl.h"
#include "weldx/common/random.h"
#include "weldx/locmetric/recall.h"

namespace weldx::locmetric {
namespace {

namespace fs = std::filesystem;
using explain::ExplanationMap;

ExplanationMap RandomMap(Rng& rng, int h, int w) {
  ExplanationMap m;
  m.normalized = true;
  m.values = RealGrid(h, w);
  for (double& v : m.values.values()) v = rng.Uniform();
  return m;
}

GroundTruthMask RandomMask(Rng& rng, int h, int w) {
  GroundTruthMask gt;
  gt.image_path = "img.png";
  gt.mask = BinaryGrid(h, w, 0);
  for (auto& v : gt.mask.values()) v = rng.Bernoulli(0.3);
  gt.mask(rng.Below(h), rng.Below(w)) = 1;
  return gt;
}

// Direct pixel loops over the two recall definitions.
double LoopSoft(const ExplanationMap& m, const GroundTruthMask& g) {
  double num = 0, den = 0;
  for (int y = 0; y < g.mask.height(); ++y) {
    for (int x = 0; x < g.mask.width(); ++x) {
      num += m.values(y, x) * g.mask(y, x);
      den += g.mask(y, x);
    }
  }
  return num / den;
}

double LoopBinary(const ExplanationMap& m, const GroundTruthMask& g, double tau) {
  double num = 0, den = 0;
  for (int y = 0; y < g.mask.height(); ++y) {
    for (int x = 0; x < g.mask.width(); ++x) {
      num += (m.values(y, x) >= tau ? 1.0 : 0.0) * g.mask(y, x);
      den += g.mask(y, x);
    }
  }
  return num / den;
}

TEST(RecallTest, MatchesPixelLoopOracle) {
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const ExplanationMap m = RandomMap(rng, 8, 8);
    const GroundTruthMask g = RandomMask(rng, 8, 8);
    const double tau = rng.Uniform();
    const double soft = Recall(m, g, RecallMode::kSoft).recall;
    const double bin = Recall(m, g, RecallMode::kBinary, tau).recall;
    EXPECT_NEAR(soft, LoopSoft(m, g), 1e-9);
    EXPECT_NEAR(bin, LoopBinary(m, g, tau), 1e-9);
    EXPECT_GE(soft, 0.0);
    EXPECT_LE(soft, 1.0);
    EXPECT_GE(bin, 0.0);
    EXPECT_LE(bin, 1.0);
  }
}

TEST(RecallTest, PooledMatchesLoopOracle) {
  Rng rng(7);
  std::vector<std::pair<ExplanationMap, GroundTruthMask>> pairs;
  for (int i = 0; i < 50; ++i) pairs.push_back({RandomMap(rng, 8, 8), RandomMask(rng, 8, 8)});
  double num = 0, den = 0;
  for (const auto& [m, g] : pairs) {
    for (size_t k = 0; k < g.mask.size(); ++k) {
      num += (m.values.values()[k] >= 0.5) * g.mask.values()[k];
      den += g.mask.values()[k];
    }
  }
  EXPECT_NEAR(PooledRecall(pairs, RecallMode::kBinary, 0.5), num / den, 1e-12);
}

TEST(RecallTest, PerfectAndEmptyCoverage) {
  GroundTruthMask g;
  g.mask = BinaryGrid(4, 4, 0);
  g.mask(1, 1) = g.mask(2, 2) = 1;
  ExplanationMap m;
  m.normalized = true;
  m.values = RealGrid(4, 4, 1.0);
  EXPECT_DOUBLE_EQ(Recall(m, g, RecallMode::kSoft).recall, 1.0);
  m.values = RealGrid(4, 4, 0.0);
  EXPECT_DOUBLE_EQ(Recall(m, g, RecallMode::kBinary, 0.5).recall, 0.0);
  // A zero map still reaches tau = 0.
  EXPECT_DOUBLE_EQ(Recall(m, g, RecallMode::kBinary, 0.0).recall, 1.0);
}

TEST(RecallTest, RejectsInvalidInputs) {
  Rng rng(1);
  const ExplanationMap m = RandomMap(rng, 8, 8);
  GroundTruthMask g = RandomMask(rng, 4, 4);
  EXPECT_THROW(Recall(m, g, RecallMode::kSoft), ValidationError);
  g = RandomMask(rng, 8, 8);
  EXPECT_THROW(Recall(m, g, RecallMode::kBinary, 1.5), ValidationError);
  g.mask = BinaryGrid(8, 8, 0);
  EXPECT_THROW(Recall(m, g, RecallMode::kSoft), ValidationError);
  ExplanationMap raw = m;
  raw.normalized = false;
  g = RandomMask(rng, 8, 8);
  EXPECT_THROW(Recall(raw, g, RecallMode::kSoft), ValidationError);
}

TEST(RecallTest, BinarizeThresholdIsInclusive) {
  ExplanationMap m;
  m.normalized = true;
  m.values = RealGrid(1, 3);
  m.values(0, 0) = 0.49;
  m.values(0, 1) = 0.5;
  m.values(0, 2) = 0.9;
  const BinaryGrid b = BinarizeHeatmap(m, 0.5);
  EXPECT_EQ(b(0, 0), 0);
  EXPECT_EQ(b(0, 1), 1);
  EXPECT_EQ(b(0, 2), 1);
}

TEST(AverageRecallTest, MeanOfRecordsAndModeCheck) {
  std::vector<RecallRecord> r(3);
  r[0].recall = 0.2;
  r[1].recall = 0.5;
  r[2].recall = 0.8;
  for (auto& x : r) x.tau = 0.5;
  EXPECT_NEAR(AverageRecall(r), 0.5, 1e-12);
  r[1].mode = RecallMode::kSoft;
  r[1].tau.reset();
  EXPECT_THROW(AverageRecall(r), ValidationError);
  EXPECT_THROW(AverageRecall(std::vector<RecallRecord>{}), ValidationError);
}

TEST(ReportTest, RecordsModeTauAndBreakdown) {
  Rng rng(5);
  std::vector<RecallRecord> records;
  for (int i = 0; i < 6; ++i) {
    GroundTruthMask g = RandomMask(rng, 8, 8);
    g.defect_type = i % 2 == 0 ? DefectType::kCrack : DefectType::kPorosity;
    records.push_back(Recall(RandomMap(rng, 8, 8), g, RecallMode::kBinary, 0.4));
  }
  const Json j = RecallReport(records);
  EXPECT_EQ(j["mode"], "binary");
  EXPECT_DOUBLE_EQ(j["tau"].get<double>(), 0.4);
  EXPECT_EQ(j["records"].size(), 6u);
  EXPECT_EQ(j["per_defect_type"]["crack"]["count"], 3);
  EXPECT_FALSE(j["per_defect_type"].contains("lack_of_penetration"));
}

TEST(MaskIoTest, LoadsMaskAndAnnotations) {
  const fs::path dir = fs::temp_directory_path() / "weldx_masks";
  fs::remove_all(dir);
  fs::create_directories(dir);
  cv::Mat mask(5, 6, CV_8UC1, cv::Scalar(0));
  mask.at<uchar>(2, 3) = 255;
  ASSERT_TRUE(cv::imwrite((dir / "a_mask.png").string(), mask));
  WriteJsonLines(dir / "annotations.jsonl",
                 {Json{{"image_path", "a.png"}, {"defect_type", "crack"},
                       {"annotator", "L2-07"}}});
  const auto ann = ReadAnnotations(dir / "annotations.jsonl");
  ASSERT_EQ(ann.size(), 1u);
  EXPECT_EQ(fs::path(ann[0].mask_path), dir / "a_mask.png");
  const GroundTruthMask g =
      LoadMask(ann[0].mask_path, ann[0].image_path, ann[0].defect_type, ann[0].annotator);
  EXPECT_EQ(g.mask.height(), 5);
  EXPECT_EQ(g.mask(2, 3), 1);
  EXPECT_EQ(g.mask(0, 0), 0);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace weldx::locmetric

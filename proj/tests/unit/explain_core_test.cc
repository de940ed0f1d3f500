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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>

#include <gtest/gtest.h>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "weldx/common/error.h"
#include "weldx/common/random.h"
#include "weldx/explain/explanation_map.h"
#include "weldx/explain/lime.h"
#include "weldx/explain/overlay.h"

namespace weldx::explain {
namespace {

namespace fs = std::filesystem;

fs::path FixtureDir() {
  const char* dir = std::getenv("WELDX_TEST_FIXTURES");
  return dir != nullptr ? fs::path(dir) : fs::path("tests/fixtures");
}

TEST(NormalizeTest, MapsToUnitRange) {
  RealGrid g(2, 2);
  g(0, 0) = -2;
  g(0, 1) = 0;
  g(1, 0) = 2;
  g(1, 1) = 1;
  const RealGrid n = MinMaxNormalize(g);
  EXPECT_DOUBLE_EQ(n(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(n(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(n(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(n(1, 1), 0.75);
}

TEST(NormalizeTest, ConstantMapBecomesZeros) {
  const RealGrid n = MinMaxNormalize(RealGrid(3, 3, 4.2));
  for (double v : n.values()) EXPECT_EQ(v, 0.0);
}

TEST(ResizeTest, MatchesOpenCvLinear) {
  Rng rng(1);
  RealGrid g(7, 7);
  for (double& v : g.values()) v = rng.Uniform();
  cv::Mat src(7, 7, CV_64FC1, g.values().data());
  cv::Mat dst;
  cv::resize(src, dst, cv::Size(30, 23), 0, 0, cv::INTER_LINEAR);
  const RealGrid r = ResizeBilinear(g, 23, 30);
  for (int y = 0; y < 23; ++y) {
    for (int x = 0; x < 30; ++x) EXPECT_NEAR(r(y, x), dst.at<double>(y, x), 1e-6);
  }
}

TEST(MapIoTest, RoundTripPreservesFloat32Values) {
  ExplanationMap m;
  m.method = ExplainMethod::kLime;
  m.class_index = 3;
  m.normalized = true;
  m.values = RealGrid(3, 5);
  for (size_t i = 0; i < m.values.size(); ++i) m.values.values()[i] = i / 14.0;
  const fs::path stem = fs::temp_directory_path() / "weldx_map_io";
  WriteMap(m, "x.png", stem);
  const ExplanationMap r = ReadMap(stem);
  EXPECT_EQ(r.method, ExplainMethod::kLime);
  EXPECT_EQ(r.class_index, 3);
  EXPECT_TRUE(r.normalized);
  for (size_t i = 0; i < m.values.size(); ++i) {
    EXPECT_EQ(r.values.values()[i], static_cast<float>(m.values.values()[i]));
  }
  fs::remove(stem.string() + ".f32");
  fs::remove(stem.string() + ".json");
}

TEST(LimeKernelTest, CosineDistanceOfMasks) {
  EXPECT_DOUBLE_EQ(MaskDistanceToOriginal({1, 1, 1, 1}, MaskDistance::kCosine), 0.0);
  EXPECT_DOUBLE_EQ(MaskDistanceToOriginal({1, 0, 0, 0}, MaskDistance::kCosine), 0.5);
  EXPECT_DOUBLE_EQ(MaskDistanceToOriginal({0, 0, 0, 0}, MaskDistance::kCosine), 1.0);
  EXPECT_DOUBLE_EQ(MaskDistanceToOriginal({1, 0, 0, 0}, MaskDistance::kEuclidean),
                   std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(LocalityWeight(0.0, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(LocalityWeight(0.5, 0.5), std::exp(-1.0));
}

TEST(LimeKernelTest, DefaultKernelWidth) {
  LimeConfig c;
  c.n_segments = 64;
  EXPECT_DOUBLE_EQ(c.KernelWidth(), 2.0);
  c.kernel_width = 0.3;
  EXPECT_DOUBLE_EQ(c.KernelWidth(), 0.3);
}

TEST(LimeSamplingTest, FirstMaskIsOriginal) {
  Rng rng(3);
  const std::vector<Mask> masks = SampleMasks(10, 50, true, rng);
  ASSERT_EQ(masks.size(), 50u);
  EXPECT_EQ(masks[0], Mask(10, 1));
  for (const Mask& m : masks) {
    for (uint8_t b : m) EXPECT_LE(b, 1);
  }
}

TEST(LimeFitTest, RecoversLinearModelExactly) {
  Rng rng(8);
  const int d = 6;
  const std::vector<Mask> masks = SampleMasks(d, 200, true, rng);
  const std::vector<double> w = {0.3, -0.2, 0.0, 0.9, -0.5, 0.1};
  std::vector<double> y, weights;
  for (const Mask& m : masks) {
    double v = 0.25;
    for (int j = 0; j < d; ++j) v += w[j] * m[j];
    y.push_back(v);
    weights.push_back(rng.Uniform(0.1, 1.0));
  }
  const LimeSurrogate s = FitWeightedLinear(masks, y, weights);
  EXPECT_FALSE(s.ridge_fallback);
  EXPECT_NEAR(s.intercept, 0.25, 1e-9);
  for (int j = 0; j < d; ++j) EXPECT_NEAR(s.coefficients[j], w[j], 1e-9);
}

TEST(LimeFitTest, SingularDesignFallsBackToRidge) {
  // Segment 1 always equals segment 0.
  std::vector<Mask> masks = {{1, 1}, {0, 0}, {1, 1}, {0, 0}};
  const LimeSurrogate s =
      FitWeightedLinear(masks, {1.0, 0.0, 1.0, 0.0}, {1, 1, 1, 1});
  EXPECT_TRUE(s.ridge_fallback);
  EXPECT_NEAR(s.coefficients[0] + s.coefficients[1], 1.0, 1e-4);
}

TEST(LimeExplainMasksTest, LinearOracleAtThousandSamples) {
  const int d = 40;
  Rng truth(99);
  std::vector<double> w(d);
  for (double& v : w) v = truth.Uniform(-1.0, 1.0);
  MaskPredictor f = [&](const std::vector<Mask>& batch) {
    std::vector<double> out;
    for (const Mask& m : batch) {
      double v = 0.1;
      for (int j = 0; j < d; ++j) v += w[j] * m[j];
      out.push_back(v);
    }
    return out;
  };
  LimeConfig c;
  c.n_segments = d;
  c.n_samples = 1000;
  const LimeSurrogate s = ExplainMasks(f, d, c, 7);
  for (int j = 0; j < d; ++j) EXPECT_NEAR(s.coefficients[j], w[j], 1e-3);
}

TEST(LimeExplainMasksTest, ConstantModelGivesZeroCoefficients) {
  MaskPredictor f = [](const std::vector<Mask>& batch) {
    return std::vector<double>(batch.size(), 0.42);
  };
  LimeConfig c;
  c.n_segments = 25;
  const LimeSurrogate s = ExplainMasks(f, 25, c, 1);
  for (double v : s.coefficients) EXPECT_NEAR(v, 0.0, 1e-6);
  EXPECT_NEAR(s.intercept, 0.42, 1e-6);
}

TEST(LimeExplainMasksTest, RejectsTooFewSamples) {
  MaskPredictor f = [](const std::vector<Mask>& b) {
    return std::vector<double>(b.size(), 0.0);
  };
  LimeConfig c;
  c.n_samples = 10;
  EXPECT_THROW(ExplainMasks(f, 20, c, 1), ValidationError);
}

cv::Mat Blocks(int rows, int cols, int cell) {
  cv::Mat img(rows, cols, CV_8UC1);
  for (int y = 0; y < rows; ++y) {
    for (int x = 0; x < cols; ++x) {
      img.at<uchar>(y, x) = static_cast<uchar>(((y / cell) * 7 + (x / cell) * 13) % 11 * 23);
    }
  }
  return img;
}

TEST(SegmentationTest, LabelsAreCompactAndCountNearTarget) {
  const cv::Mat img = Blocks(64, 64, 8);
  const Grid<int> seg = SegmentImage(img, 50);
  const int n = SegmentCount(seg);
  EXPECT_GE(n, 25);
  EXPECT_LE(n, 100);
  std::set<int> labels(seg.values().begin(), seg.values().end());
  EXPECT_EQ(static_cast<int>(labels.size()), n);
  EXPECT_EQ(*labels.begin(), 0);
  EXPECT_EQ(*labels.rbegin(), n - 1);
  EXPECT_EQ(seg(0, 0), 0);
}

TEST(ApplyMaskTest, OffSegmentsTakeFillValue) {
  cv::Mat img(2, 2, CV_8UC1, cv::Scalar(200));
  Grid<int> seg(2, 2, 0);
  seg(1, 1) = 1;
  const cv::Mat out = ApplyMask(img, seg, {1, 0}, cv::Scalar(7));
  EXPECT_EQ(out.at<uchar>(0, 0), 200);
  EXPECT_EQ(out.at<uchar>(1, 1), 7);
}

TEST(LimeExplainTest, BrightSegmentGetsLargestWeight) {
  cv::Mat img = Blocks(48, 48, 12);
  cv::rectangle(img, cv::Rect(12, 12, 12, 12), cv::Scalar(255), cv::FILLED);
  // Probability of class 1 grows with the brightness of the marked square.
  ImagePredictor f = [](const std::vector<cv::Mat>& batch) {
    std::vector<std::vector<double>> out;
    for (const cv::Mat& m : batch) {
      const double v = cv::mean(m(cv::Rect(14, 14, 8, 8)))[0] / 255.0;
      out.push_back({1.0 - v, v, 0.0, 0.0});
    }
    return out;
  };
  LimeConfig c;
  c.n_segments = 16;
  c.n_samples = 300;
  const ExplanationMap m = LimeExplain(img, 1, f, c, 3);
  EXPECT_EQ(m.method, ExplainMethod::kLime);
  const int target = m.segments(18, 18);
  for (size_t s = 0; s < m.segment_weights.size(); ++s) {
    if (static_cast<int>(s) != target) {
      EXPECT_GT(m.segment_weights[target], m.segment_weights[s]);
    }
  }
  EXPECT_DOUBLE_EQ(m.values(18, 18), m.segment_weights[target]);
}

TEST(OverlayTest, MatchesGoldenRendering) {
  const fs::path dir = FixtureDir() / "overlay";
  const cv::Mat image = cv::imread((dir / "image.png").string(), cv::IMREAD_UNCHANGED);
  const cv::Mat expected =
      cv::imread((dir / "expected_gradcam.png").string(), cv::IMREAD_COLOR);
  ASSERT_FALSE(image.empty());
  ASSERT_FALSE(expected.empty());
  const ExplanationMap map = ReadMap(dir / "map");
  const cv::Mat out = RenderOverlay(image, map, 0.6);
  ASSERT_EQ(out.size(), expected.size());
  EXPECT_LE(cv::norm(out, expected, cv::NORM_INF), 1.0);
  // Zero-relevance rows are untouched.
  cv::Mat gray_bgr;
  cv::cvtColor(image, gray_bgr, cv::COLOR_GRAY2BGR);
  EXPECT_EQ(cv::norm(out(cv::Rect(0, 0, 32, 4)), gray_bgr(cv::Rect(0, 0, 32, 4)),
                     cv::NORM_INF),
            0.0);
}

TEST(OverlayTest, AlphaZeroIsIdentityAndValidatesInputs) {
  ExplanationMap map;
  map.values = RealGrid(4, 4, 0.7);
  map.normalized = true;
  const cv::Mat img(4, 4, CV_8UC3, cv::Scalar(10, 20, 30));
  EXPECT_EQ(cv::norm(RenderOverlay(img, map, 0.0), img, cv::NORM_INF), 0.0);
  EXPECT_THROW(RenderOverlay(img, map, 1.5), ValidationError);
  map.normalized = false;
  EXPECT_THROW(RenderOverlay(img, map, 0.5), ValidationError);
}

TEST(OverlayTest, LimeOutlinesTopSegment) {
  ExplanationMap map;
  map.method = ExplainMethod::kLime;
  map.normalized = true;
  map.values = RealGrid(6, 6, 0.0);
  map.segments = Grid<int>(6, 6, 0);
  for (int y = 0; y < 6; ++y) {
    for (int x = 3; x < 6; ++x) map.segments(y, x) = 1;
  }
  map.segment_weights = {-0.5, 0.8};
  const cv::Mat img(6, 6, CV_8UC1, cv::Scalar(0));
  const cv::Mat out = RenderOverlay(img, map, 1.0, 1);
  EXPECT_EQ(out.at<cv::Vec3b>(2, 3), cv::Vec3b(0, 255, 0));  // boundary of 1
  EXPECT_EQ(out.at<cv::Vec3b>(2, 4), cv::Vec3b(0, 0, 0));    // interior
  EXPECT_EQ(out.at<cv::Vec3b>(2, 2), cv::Vec3b(0, 0, 0));    // negative seg
}

}  // namespace
}  // namespace weldx::explain

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

#include "weldx/dataset/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "weldx/common/error.h"
#include "weldx/common/jsonl.h"
#include "weldx/common/random.h"
#include "weldx/dataset/manifest.h"

namespace weldx::dataset {

namespace fs = std::filesystem;

namespace {

constexpr double kDefectDarkening = 70.0;

void DrawDefect(std::string_view cls, int size, Rng& rng, cv::Mat& mask) {
  const double bead_top = 0.35 * size, bead_bottom = 0.65 * size;
  const int thickness = std::max(1, size / 32);
  if (cls == "crack") {
    const double len = rng.Uniform(0.35, 0.6) * size;
    const double angle = rng.Uniform(15.0, 35.0) * (rng.Bernoulli() ? 1 : -1) * M_PI / 180.0;
    const cv::Point2d c(rng.Uniform(0.3, 0.7) * size, rng.Uniform(bead_top, bead_bottom));
    const cv::Point2d d(0.5 * len * std::cos(angle), 0.5 * len * std::sin(angle));
    cv::line(mask, c - d, c + d, 255, thickness, cv::LINE_8);
  } else if (cls == "lack_of_penetration") {
    const double len = rng.Uniform(0.5, 0.8) * size;
    const double x0 = rng.Uniform(0.05 * size, size - len - 0.05 * size);
    const double y = 0.5 * size + rng.Uniform(-0.03, 0.03) * size;
    cv::line(mask, cv::Point2d(x0, y), cv::Point2d(x0 + len, y), 255, 2 * thickness,
             cv::LINE_8);
  } else if (cls == "porosity") {
    const cv::Point2d center(rng.Uniform(0.3, 0.7) * size, 0.5 * size);
    const int pores = 3 + static_cast<int>(rng.Below(4));
    for (int p = 0; p < pores; ++p) {
      const cv::Point2d at(center.x + rng.Normal(0.0, 0.08 * size),
                           center.y + rng.Normal(0.0, 0.05 * size));
      const int radius = std::max(1, static_cast<int>(rng.Uniform(0.025, 0.05) * size));
      cv::circle(mask, at, radius, 255, cv::FILLED, cv::LINE_8);
    }
  }
}

}  // namespace

SyntheticCorpus SynthesizeCorpus(const fs::path& root, const SyntheticCorpusOptions& options) {
  if (options.per_class < 2) throw ValidationError("per_class must be >= 2");
  if (options.size < 16) throw ValidationError("image size must be >= 16");
  const int n = options.size;
  fs::create_directories(root / "masks");
  SyntheticCorpus out;
  out.annotations = root / "annotations.jsonl";
  std::vector<Json> annotations;
  for (int c = 0; c < kNumClasses; ++c) {
    const std::string cls(kClassNames[c]);
    fs::create_directories(root / cls);
    for (int i = 0; i < options.per_class; ++i) {
      Rng rng(DeriveSeed({options.seed, static_cast<uint64_t>(c), static_cast<uint64_t>(i)}));
      cv::Mat mask = cv::Mat::zeros(n, n, CV_8UC1);
      DrawDefect(cls, n, rng, mask);
      cv::Mat image(n, n, CV_64FC1);
      for (int y = 0; y < n; ++y) {
        const double bead = std::abs(y - 0.5 * n) < 0.15 * n ? 40.0 : 0.0;
        for (int x = 0; x < n; ++x) {
          const double dark = mask.at<uchar>(y, x) ? kDefectDarkening : 0.0;
          image.at<double>(y, x) = 100.0 + bead - dark + rng.Normal(0.0, 10.0);
        }
      }
      cv::Mat gray;
      image.convertTo(gray, CV_8UC1);  // saturating
      char stem[96];
      std::snprintf(stem, sizeof(stem), "%s_%04d", cls.c_str(), i);
      const fs::path image_path = root / cls / (std::string(stem) + ".png");
      if (!cv::imwrite(image_path.string(), gray)) {
        throw IoError("cannot write '" + image_path.string() + "'");
      }
      ++out.images;
      if (cls == "no_defect") continue;
      const std::string mask_rel = "masks/" + std::string(stem) + "_mask.png";
      if (!cv::imwrite((root / mask_rel).string(), mask)) {
        throw IoError("cannot write '" + (root / mask_rel).string() + "'");
      }
      annotations.push_back({{"image_path", cls + "/" + stem + ".png"},
                             {"mask_path", mask_rel},
                             {"defect_type", cls},
                             {"annotator", "synthetic"}});
    }
  }
  WriteJsonLines(out.annotations, annotations);
  return out;
}

}  // namespace weldx::dataset

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

#include "weldx/dataset/augment.h"

#include <filesystem>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "weldx/common/error.h"
#include "weldx/common/random.h"
#include "weldx/dataset/preprocess.h"

namespace weldx::dataset {

namespace fs = std::filesystem;

AugmentParams AugmentParamsFromSeed(uint64_t augment_seed) {
  Rng rng(augment_seed);
  AugmentParams p;
  p.flip_horizontal = rng.Bernoulli();
  p.flip_vertical = rng.Bernoulli();
  p.rotation_degrees = rng.Uniform(-10.0, 10.0);
  p.brightness = rng.Uniform(0.9, 1.1);
  return p;
}

cv::Mat ApplyAugmentation(const cv::Mat& image, const AugmentParams& params) {
  cv::Mat out = image.clone();
  if (params.flip_horizontal && params.flip_vertical) {
    cv::flip(out, out, -1);
  } else if (params.flip_horizontal) {
    cv::flip(out, out, 1);
  } else if (params.flip_vertical) {
    cv::flip(out, out, 0);
  }
  if (params.rotation_degrees != 0.0) {
    const cv::Point2f center((out.cols - 1) / 2.0f, (out.rows - 1) / 2.0f);
    const cv::Mat rot =
        cv::getRotationMatrix2D(center, params.rotation_degrees, 1.0);
    cv::Mat rotated;
    cv::warpAffine(out, rotated, rot, out.size(), cv::INTER_LINEAR,
                   cv::BORDER_REFLECT_101);
    out = rotated;
  }
  if (params.brightness != 1.0) {
    out.convertTo(out, -1, params.brightness, 0.0);  // saturating
  }
  return out;
}

int MaterializeAugmentations(const DatasetManifest& manifest) {
  int written = 0;
  for (const SampleEntry& s : manifest.samples) {
    if (s.origin != Origin::kAugmented) continue;
    const fs::path dst = manifest.AbsolutePath(s);
    if (fs::exists(dst)) continue;
    if (!s.source || !s.augment_seed) {
      throw ValidationError("augmented entry '" + s.path + "' lacks its source");
    }
    const cv::Mat src = DecodeImage(manifest.root / fs::path(*s.source));
    const cv::Mat img =
        ApplyAugmentation(src, AugmentParamsFromSeed(*s.augment_seed));
    fs::create_directories(dst.parent_path());
    if (!cv::imwrite(dst.string(), img)) {
      throw IoError("cannot write '" + dst.string() + "'");
    }
    ++written;
  }
  return written;
}

}  // namespace weldx::dataset

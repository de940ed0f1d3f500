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

#ifndef WELDX_DATASET_AUGMENT_H_
#define WELDX_DATASET_AUGMENT_H_

#include <cstdint>

#include <opencv2/core.hpp>

#include "weldx/dataset/manifest.h"

namespace weldx::dataset {

// One label-preserving transform drawn from the fixed policy: independent
// horizontal/vertical flips, rotation in [-10, 10] degrees and brightness
// scaling in [0.9, 1.1].
struct AugmentParams {
  bool flip_horizontal = false;
  bool flip_vertical = false;
  double rotation_degrees = 0.0;
  double brightness = 1.0;
};

AugmentParams AugmentParamsFromSeed(uint64_t augment_seed);

// Output has the input's size and type. Rotation reflects at the borders.
cv::Mat ApplyAugmentation(const cv::Mat& image, const AugmentParams& params);

// Writes the image file of every augmented entry that does not exist yet,
// derived from its `source`. Returns the number of files written. Must be
// run by a single process.
int MaterializeAugmentations(const DatasetManifest& manifest);

}  // namespace weldx::dataset

#endif  // WELDX_DATASET_AUGMENT_H_

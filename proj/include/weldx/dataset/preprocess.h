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

#ifndef WELDX_DATASET_PREPROCESS_H_
#define WELDX_DATASET_PREPROCESS_H_

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

#include "weldx/common/jsonl.h"

namespace weldx::dataset {

struct PreprocessSpec {
  int target_height = 224;
  int target_width = 224;
  // Channel statistics of the natural-image corpus the backbones were
  // pretrained on, in RGB order.
  std::array<double, 3> mean = {0.485, 0.456, 0.406};
  std::array<double, 3> stddev = {0.229, 0.224, 0.225};
  bool grayscale_to_rgb = true;

  // ValidationError unless sizes and stddevs are positive.
  void Validate() const;
  bool operator==(const PreprocessSpec&) const = default;
};

// CHW float tensor, RGB channel order.
struct ImageTensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> data;

  float at(int c, int y, int x) const {
    return data[(static_cast<size_t>(c) * height + y) * width + x];
  }
};

// Decodes an image file to 8-bit, 1 or 3 channels (BGR). 16-bit films are
// rescaled to 8 bits; alpha is dropped. DecodeError on failure.
// {target_size: [h, w], mean: [..], std: [..], grayscale_to_rgb}. Unknown
// keys are rejected; missing keys keep their defaults.
Json ToJson(const PreprocessSpec& spec);
PreprocessSpec PreprocessSpecFromJson(const Json& j);

cv::Mat DecodeImage(const std::filesystem::path& path);

// Resize (bilinear) then normalize each channel as (pixel/255 - mean)/std.
// A single-channel image is replicated to 3 channels when
// spec.grayscale_to_rgb is set; otherwise it is rejected.
ImageTensor Preprocess(const cv::Mat& image, const PreprocessSpec& spec);

ImageTensor PreprocessFile(const std::filesystem::path& path,
                           const PreprocessSpec& spec);

}  // namespace weldx::dataset

#endif  // WELDX_DATASET_PREPROCESS_H_

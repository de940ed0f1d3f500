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

#ifndef WELDX_EXPLAIN_EXPLANATION_MAP_H_
#define WELDX_EXPLAIN_EXPLANATION_MAP_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "weldx/common/grid.h"

namespace weldx::explain {

enum class ExplainMethod { kGradCam, kLime };

std::string_view Name(ExplainMethod method);
ExplainMethod ParseExplainMethod(std::string_view name);

// Spatial relevance over an input image.
struct ExplanationMap {
  ExplainMethod method = ExplainMethod::kGradCam;
  RealGrid values;
  int class_index = 0;
  // Values min-max mapped to [0, 1] (all zeros for a constant map).
  bool normalized = false;
  // LIME only: superpixel label per pixel and the surrogate coefficient of
  // each superpixel.
  Grid<int> segments;
  std::vector<double> segment_weights;
};

// Min-max normalization; a constant grid maps to all zeros.
RealGrid MinMaxNormalize(const RealGrid& grid);
ExplanationMap Normalized(const ExplanationMap& map);

// Bilinear resampling with half-pixel centers (align_corners = false), the
// convention of common deep-learning frameworks and cv::INTER_LINEAR.
RealGrid ResizeBilinear(const RealGrid& grid, int height, int width);

// Raw export: `<stem>.f32` holds height*width little-endian float32 values
// in row-major order; `<stem>.json` holds {method, class_index, image_path,
// normalized, height, width}.
void WriteMap(const ExplanationMap& map, const std::string& image_path,
              const std::filesystem::path& stem);
ExplanationMap ReadMap(const std::filesystem::path& stem);

}  // namespace weldx::explain

#endif  // WELDX_EXPLAIN_EXPLANATION_MAP_H_

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

#ifndef WELDX_EXPLAIN_OVERLAY_H_
#define WELDX_EXPLAIN_OVERLAY_H_

#include <opencv2/core.hpp>

#include "weldx/explain/explanation_map.h"

namespace weldx::explain {

// Renders `map` over `image` (8-bit gray or BGR); returns BGR of the same
// size. Grad-CAM maps are blended through the jet colormap with per-pixel
// opacity alpha * value, so zero relevance leaves a pixel untouched. LIME
// maps outline the `top_k` segments with the largest positive coefficients,
// blended at opacity alpha. The map must be normalized; it is resampled
// bilinearly when its size differs from the image.
cv::Mat RenderOverlay(const cv::Mat& image, const ExplanationMap& map,
                      double alpha, int top_k = 5);

}  // namespace weldx::explain

#endif  // WELDX_EXPLAIN_OVERLAY_H_

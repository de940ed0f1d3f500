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

#include "weldx/explain/overlay.h"

#include <algorithm>
#include <numeric>

#include <opencv2/imgproc.hpp>

#include "weldx/common/error.h"

namespace weldx::explain {

namespace {

const cv::Vec3b kOutlineColor(0, 255, 0);

cv::Mat ToBgr(const cv::Mat& image) {
  if (image.depth() != CV_8U) throw ValidationError("overlay expects an 8-bit image");
  cv::Mat bgr;
  if (image.channels() == 1) {
    cv::cvtColor(image, bgr, cv::COLOR_GRAY2BGR);
  } else if (image.channels() == 3) {
    bgr = image.clone();
  } else {
    throw ValidationError("overlay expects a 1- or 3-channel image");
  }
  return bgr;
}

cv::Mat RenderHeatmap(const cv::Mat& bgr, const RealGrid& values, double alpha) {
  cv::Mat levels(bgr.rows, bgr.cols, CV_8UC1);
  for (int y = 0; y < bgr.rows; ++y) {
    for (int x = 0; x < bgr.cols; ++x) {
      levels.at<uchar>(y, x) = cv::saturate_cast<uchar>(values(y, x) * 255.0);
    }
  }
  cv::Mat colors;
  cv::applyColorMap(levels, colors, cv::COLORMAP_JET);
  cv::Mat out = bgr.clone();
  for (int y = 0; y < bgr.rows; ++y) {
    for (int x = 0; x < bgr.cols; ++x) {
      const double a = alpha * std::clamp(values(y, x), 0.0, 1.0);
      if (a == 0.0) continue;
      const cv::Vec3b& src = bgr.at<cv::Vec3b>(y, x);
      const cv::Vec3b& col = colors.at<cv::Vec3b>(y, x);
      cv::Vec3b& dst = out.at<cv::Vec3b>(y, x);
      for (int c = 0; c < 3; ++c) {
        dst[c] = cv::saturate_cast<uchar>(src[c] * (1.0 - a) + col[c] * a);
      }
    }
  }
  return out;
}

cv::Mat RenderOutlines(const cv::Mat& bgr, const ExplanationMap& map,
                       double alpha, int top_k) {
  if (map.segments.empty() || !map.segments.SameShape(bgr.rows, bgr.cols)) {
    throw ValidationError("LIME overlay needs segments at image resolution");
  }
  std::vector<int> order(map.segment_weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return map.segment_weights[a] > map.segment_weights[b];
  });
  std::vector<bool> selected(map.segment_weights.size(), false);
  for (int i = 0; i < std::min<int>(top_k, order.size()); ++i) {
    if (map.segment_weights[order[i]] > 0.0) selected[order[i]] = true;
  }
  cv::Mat out = bgr.clone();
  if (alpha == 0.0) return out;
  const Grid<int>& seg = map.segments;
  for (int y = 0; y < bgr.rows; ++y) {
    for (int x = 0; x < bgr.cols; ++x) {
      const int s = seg(y, x);
      if (!selected[s]) continue;
      const bool boundary = (y > 0 && seg(y - 1, x) != s) ||
                            (y + 1 < bgr.rows && seg(y + 1, x) != s) ||
                            (x > 0 && seg(y, x - 1) != s) ||
                            (x + 1 < bgr.cols && seg(y, x + 1) != s);
      if (!boundary) continue;
      const cv::Vec3b& src = bgr.at<cv::Vec3b>(y, x);
      cv::Vec3b& dst = out.at<cv::Vec3b>(y, x);
      for (int c = 0; c < 3; ++c) {
        dst[c] = cv::saturate_cast<uchar>(src[c] * (1.0 - alpha) +
                                          kOutlineColor[c] * alpha);
      }
    }
  }
  return out;
}

}  // namespace

cv::Mat RenderOverlay(const cv::Mat& image, const ExplanationMap& map,
                      double alpha, int top_k) {
  if (!map.normalized) throw ValidationError("overlay requires a normalized map");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in [0, 1]");
  const cv::Mat bgr = ToBgr(image);
  if (map.method == ExplainMethod::kLime) {
    return RenderOutlines(bgr, map, alpha, top_k);
  }
  const RealGrid values = map.values.SameShape(bgr.rows, bgr.cols)
                              ? map.values
                              : ResizeBilinear(map.values, bgr.rows, bgr.cols);
  return RenderHeatmap(bgr, values, alpha);
}

}  // namespace weldx::explain

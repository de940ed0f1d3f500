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

#include "weldx/explain/explanation_map.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "weldx/common/error.h"
#include "weldx/common/jsonl.h"

namespace weldx::explain {

std::string_view Name(ExplainMethod method) {
  return method == ExplainMethod::kGradCam ? "grad_cam" : "lime";
}

ExplainMethod ParseExplainMethod(std::string_view name) {
  if (name == "grad_cam" || name == "gradcam") return ExplainMethod::kGradCam;
  if (name == "lime") return ExplainMethod::kLime;
  throw ConfigError("unknown explanation method '" + std::string(name) + "'");
}

RealGrid MinMaxNormalize(const RealGrid& grid) {
  RealGrid out(grid.height(), grid.width(), 0.0);
  if (grid.empty()) return out;
  const auto [lo, hi] = std::minmax_element(grid.values().begin(),
                                            grid.values().end());
  const double min = *lo;
  const double range = *hi - min;
  if (!(range > 0.0)) return out;
  for (size_t i = 0; i < grid.size(); ++i) {
    out.values()[i] = (grid.values()[i] - min) / range;
  }
  return out;
}

ExplanationMap Normalized(const ExplanationMap& map) {
  ExplanationMap out = map;
  out.values = MinMaxNormalize(map.values);
  out.normalized = true;
  return out;
}

RealGrid ResizeBilinear(const RealGrid& grid, int height, int width) {
  if (grid.empty()) throw ValidationError("cannot resize an empty grid");
  if (height <= 0 || width <= 0) throw ValidationError("bad target size");
  RealGrid out(height, width);
  const double sy = static_cast<double>(grid.height()) / height;
  const double sx = static_cast<double>(grid.width()) / width;
  for (int y = 0; y < height; ++y) {
    const double fy = std::max((y + 0.5) * sy - 0.5, 0.0);
    const int y0 = std::min(static_cast<int>(fy), grid.height() - 1);
    const int y1 = std::min(y0 + 1, grid.height() - 1);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::max((x + 0.5) * sx - 0.5, 0.0);
      const int x0 = std::min(static_cast<int>(fx), grid.width() - 1);
      const int x1 = std::min(x0 + 1, grid.width() - 1);
      const double wx = fx - x0;
      const double top = grid(y0, x0) * (1 - wx) + grid(y0, x1) * wx;
      const double bottom = grid(y1, x0) * (1 - wx) + grid(y1, x1) * wx;
      out(y, x) = top * (1 - wy) + bottom * wy;
    }
  }
  return out;
}

void WriteMap(const ExplanationMap& map, const std::string& image_path,
              const std::filesystem::path& stem) {
  static_assert(std::endian::native == std::endian::little,
                "raw map export assumes a little-endian host");
  std::string bytes(map.values.size() * sizeof(float), '\0');
  for (size_t i = 0; i < map.values.size(); ++i) {
    const float v = static_cast<float>(map.values.values()[i]);
    std::memcpy(bytes.data() + i * sizeof(float), &v, sizeof(float));
  }
  std::filesystem::path raw = stem;
  raw += ".f32";
  std::filesystem::path meta = stem;
  meta += ".json";
  WriteFileBytes(raw, bytes);
  Json j;
  j["method"] = Name(map.method);
  j["class_index"] = map.class_index;
  j["image_path"] = image_path;
  j["normalized"] = map.normalized;
  j["height"] = map.values.height();
  j["width"] = map.values.width();
  WriteJsonFile(meta, j);
}

ExplanationMap ReadMap(const std::filesystem::path& stem) {
  std::filesystem::path raw = stem;
  raw += ".f32";
  std::filesystem::path meta = stem;
  meta += ".json";
  const Json j = ReadJsonFile(meta);
  ExplanationMap map;
  map.method = ParseExplainMethod(j.at("method").get<std::string>());
  map.class_index = j.at("class_index").get<int>();
  map.normalized = j.at("normalized").get<bool>();
  const int h = j.at("height").get<int>();
  const int w = j.at("width").get<int>();
  const std::string bytes = ReadFileBytes(raw);
  if (bytes.size() != static_cast<size_t>(h) * w * sizeof(float)) {
    throw ValidationError("raw map size does not match its sidecar");
  }
  map.values = RealGrid(h, w);
  for (size_t i = 0; i < map.values.size(); ++i) {
    float v;
    std::memcpy(&v, bytes.data() + i * sizeof(float), sizeof(float));
    map.values.values()[i] = v;
  }
  return map;
}

}  // namespace weldx::explain

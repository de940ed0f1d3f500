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

#include "weldx/dataset/preprocess.h"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "weldx/common/error.h"

namespace weldx::dataset {

void PreprocessSpec::Validate() const {
  std::vector<FieldError> errors;
  if (target_height <= 0) errors.push_back({"target_height", "must be > 0"});
  if (target_width <= 0) errors.push_back({"target_width", "must be > 0"});
  for (int c = 0; c < 3; ++c) {
    if (!(stddev[c] > 0.0)) {
      errors.push_back({"stddev[" + std::to_string(c) + "]", "must be > 0"});
    }
  }
  if (!errors.empty()) throw ValidationError("invalid preprocess spec", errors);
}

Json ToJson(const PreprocessSpec& spec) {
  Json j;
  j["target_size"] = {spec.target_height, spec.target_width};
  j["mean"] = spec.mean;
  j["std"] = spec.stddev;
  j["grayscale_to_rgb"] = spec.grayscale_to_rgb;
  return j;
}

PreprocessSpec PreprocessSpecFromJson(const Json& j) {
  if (!j.is_object()) throw ConfigError("preprocess spec must be a JSON object");
  PreprocessSpec spec;
  std::vector<FieldError> errors;
  auto triple = [&](const Json& v, const char* key, std::array<double, 3>& out) {
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
        !v[1].is_number() || !v[2].is_number()) {
      errors.push_back({key, "must be a list of 3 numbers"});
      return;
    }
    for (int c = 0; c < 3; ++c) out[c] = v[c].get<double>();
  };
  for (const auto& [key, v] : j.items()) {
    if (key == "target_size") {
      if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
          !v[1].is_number_integer()) {
        errors.push_back({key, "must be [height, width]"});
      } else {
        spec.target_height = v[0].get<int>();
        spec.target_width = v[1].get<int>();
      }
    } else if (key == "mean") {
      triple(v, "mean", spec.mean);
    } else if (key == "std") {
      triple(v, "std", spec.stddev);
    } else if (key == "grayscale_to_rgb") {
      if (!v.is_boolean()) {
        errors.push_back({key, "must be a boolean"});
      } else {
        spec.grayscale_to_rgb = v.get<bool>();
      }
    } else {
      errors.push_back({key, "unknown key"});
    }
  }
  if (!errors.empty()) throw ValidationError("invalid preprocess spec", errors);
  spec.Validate();
  return spec;
}

cv::Mat DecodeImage(const std::filesystem::path& path) {
  cv::Mat raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (raw.empty()) throw DecodeError(path.string(), "unsupported or corrupt");
  cv::Mat img;
  if (raw.depth() == CV_16U) {
    raw.convertTo(img, CV_8U, 1.0 / 257.0);
  } else if (raw.depth() == CV_8U) {
    img = raw;
  } else {
    throw DecodeError(path.string(), "unsupported pixel depth");
  }
  if (img.channels() == 4) {
    cv::cvtColor(img, img, cv::COLOR_BGRA2BGR);
  } else if (img.channels() == 2) {
    throw DecodeError(path.string(), "unsupported channel count");
  }
  return img;
}

ImageTensor Preprocess(const cv::Mat& image, const PreprocessSpec& spec) {
  spec.Validate();
  if (image.empty() || image.depth() != CV_8U ||
      (image.channels() != 1 && image.channels() != 3)) {
    throw ValidationError("preprocess expects an 8-bit 1- or 3-channel image");
  }
  cv::Mat rgb;
  if (image.channels() == 1) {
    if (!spec.grayscale_to_rgb) {
      throw ValidationError(
          "single-channel image with grayscale_to_rgb disabled");
    }
    cv::cvtColor(image, rgb, cv::COLOR_GRAY2RGB);
  } else {
    cv::cvtColor(image, rgb, cv::COLOR_BGR2RGB);
  }
  cv::Mat resized;
  if (rgb.rows == spec.target_height && rgb.cols == spec.target_width) {
    resized = rgb;
  } else {
    cv::resize(rgb, resized, cv::Size(spec.target_width, spec.target_height),
               0, 0, cv::INTER_LINEAR);
  }
  ImageTensor t;
  t.channels = 3;
  t.height = spec.target_height;
  t.width = spec.target_width;
  t.data.resize(static_cast<size_t>(3) * t.height * t.width);
  for (int c = 0; c < 3; ++c) {
    const double mean = spec.mean[c];
    const double inv_std = 1.0 / spec.stddev[c];
    float* plane = t.data.data() + static_cast<size_t>(c) * t.height * t.width;
    for (int y = 0; y < t.height; ++y) {
      const cv::Vec3b* row = resized.ptr<cv::Vec3b>(y);
      for (int x = 0; x < t.width; ++x) {
        plane[static_cast<size_t>(y) * t.width + x] =
            static_cast<float>((row[x][c] / 255.0 - mean) * inv_std);
      }
    }
  }
  return t;
}

ImageTensor PreprocessFile(const std::filesystem::path& path,
                           const PreprocessSpec& spec) {
  return Preprocess(DecodeImage(path), spec);
}

}  // namespace weldx::dataset

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

#include "weldx/explain/lime.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <Eigen/Dense>
#include <opencv2/imgproc.hpp>
#include <opencv2/ximgproc/segmentation.hpp>

#include "weldx/common/error.h"

namespace weldx::explain {

double LimeConfig::KernelWidth() const {
  return kernel_width.value_or(0.25 * std::sqrt(static_cast<double>(n_segments)));
}

void LimeConfig::Validate(int segments) const {
  std::vector<FieldError> errors;
  if (n_segments < 2) errors.push_back({"n_segments", "must be >= 2"});
  if (n_samples < segments + 1) {
    errors.push_back({"n_samples", "must be >= number of segments + 1"});
  }
  if (!(KernelWidth() > 0.0)) errors.push_back({"kernel_width", "must be > 0"});
  if (top_k_segments < 0) errors.push_back({"top_k_segments", "must be >= 0"});
  if (batch_size < 1) errors.push_back({"batch_size", "must be >= 1"});
  if (!errors.empty()) throw ValidationError("invalid LIME config", errors);
}

double MaskDistanceToOriginal(const Mask& z, MaskDistance kind) {
  int on = 0;
  for (uint8_t b : z) on += b != 0;
  const int d = static_cast<int>(z.size());
  if (kind == MaskDistance::kEuclidean) return std::sqrt(static_cast<double>(d - on));
  if (on == 0) return 1.0;
  // cos(z, 1) = (z . 1) / (|z| |1|) = on / (sqrt(on) sqrt(d)).
  return 1.0 - std::sqrt(static_cast<double>(on) / d);
}

double LocalityWeight(double distance, double kernel_width) {
  return std::exp(-(distance * distance) / (kernel_width * kernel_width));
}

std::vector<Mask> SampleMasks(int n_segments, int n_samples,
                              bool include_original, Rng& rng) {
  std::vector<Mask> masks;
  masks.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    Mask z(n_segments, 1);
    if (!(include_original && i == 0)) {
      for (auto& b : z) b = rng.Bernoulli() ? 1 : 0;
    }
    masks.push_back(std::move(z));
  }
  return masks;
}

LimeSurrogate FitWeightedLinear(const std::vector<Mask>& masks,
                                const std::vector<double>& targets,
                                const std::vector<double>& weights) {
  if (masks.empty() || masks.size() != targets.size() ||
      masks.size() != weights.size()) {
    throw ValidationError("surrogate fit needs equally many masks, targets and weights");
  }
  const int n = static_cast<int>(masks.size());
  const int p = static_cast<int>(masks[0].size()) + 1;
  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = 1.0;
    for (int j = 1; j < p; ++j) x(i, j) = masks[i][j - 1];
    y(i) = targets[i];
    w(i) = weights[i];
  }
  const Eigen::MatrixXd xtw = x.transpose() * w.asDiagonal();
  Eigen::MatrixXd normal = xtw * x;
  const Eigen::VectorXd rhs = xtw * y;

  LimeSurrogate out;
  Eigen::VectorXd beta;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(normal);
  lu.setThreshold(1e-10);
  if (lu.rank() == p) {
    beta = normal.ldlt().solve(rhs);
  } else {
    const double scale = std::max(1.0, normal.diagonal().mean());
    for (int j = 1; j < p; ++j) normal(j, j) += 1e-6 * scale;
    // The intercept column may itself be degenerate (all weights zero).
    normal(0, 0) += 1e-12 * scale;
    beta = normal.ldlt().solve(rhs);
    out.ridge_fallback = true;
  }
  out.intercept = beta(0);
  out.coefficients.assign(beta.data() + 1, beta.data() + p);
  return out;
}

LimeSurrogate ExplainMasks(const MaskPredictor& predictor, int n_segments,
                           const LimeConfig& config, uint64_t seed) {
  config.Validate(n_segments);
  Rng rng(seed);
  const std::vector<Mask> masks =
      SampleMasks(n_segments, config.n_samples, config.include_original, rng);
  std::vector<double> targets;
  targets.reserve(masks.size());
  for (size_t start = 0; start < masks.size(); start += config.batch_size) {
    const size_t end = std::min(masks.size(), start + config.batch_size);
    std::vector<Mask> batch(masks.begin() + start, masks.begin() + end);
    const std::vector<double> out = predictor(batch);
    if (out.size() != batch.size()) {
      throw ValidationError("predictor returned a wrong number of outputs");
    }
    targets.insert(targets.end(), out.begin(), out.end());
  }
  std::vector<double> weights;
  weights.reserve(masks.size());
  const double width = config.KernelWidth();
  for (const Mask& z : masks) {
    weights.push_back(
        LocalityWeight(MaskDistanceToOriginal(z, config.distance), width));
  }
  return FitWeightedLinear(masks, targets, weights);
}

Grid<int> SegmentImage(const cv::Mat& image, int target_segments) {
  if (image.empty()) throw ValidationError("cannot segment an empty image");
  cv::Mat input = image;
  if (input.channels() == 1) cv::cvtColor(image, input, cv::COLOR_GRAY2BGR);
  const int min_size =
      std::max(4, static_cast<int>(image.total()) / (target_segments * 8));

  auto run = [&](double k) {
    auto seg = cv::ximgproc::segmentation::createGraphSegmentation(0.8, k, min_size);
    cv::Mat labels;
    seg->processImage(input, labels);
    return labels;
  };
  auto count = [](const cv::Mat& labels) {
    double max_label;
    cv::minMaxLoc(labels, nullptr, &max_label);
    return static_cast<int>(max_label) + 1;
  };

  // Segment count decreases with k; bisect log k.
  double lo = std::log(1.0), hi = std::log(1e6);
  cv::Mat best = run(std::exp(hi));
  int best_gap = std::abs(count(best) - target_segments);
  for (int iter = 0; iter < 18 && best_gap > 0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    cv::Mat labels = run(std::exp(mid));
    const int c = count(labels);
    const int gap = std::abs(c - target_segments);
    if (gap < best_gap) {
      best_gap = gap;
      best = labels;
    }
    if (c > target_segments) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  Grid<int> out(image.rows, image.cols);
  std::unordered_map<int, int> relabel;
  for (int y = 0; y < image.rows; ++y) {
    const int* row = best.ptr<int>(y);
    for (int x = 0; x < image.cols; ++x) {
      auto [it, _] = relabel.emplace(row[x], static_cast<int>(relabel.size()));
      out(y, x) = it->second;
    }
  }
  return out;
}

int SegmentCount(const Grid<int>& segments) {
  int max_label = -1;
  for (int v : segments.values()) max_label = std::max(max_label, v);
  return max_label + 1;
}

cv::Mat ApplyMask(const cv::Mat& image, const Grid<int>& segments,
                  const Mask& mask, const cv::Scalar& fill) {
  cv::Mat out = image.clone();
  const int ch = image.channels();
  for (int y = 0; y < image.rows; ++y) {
    uchar* row = out.ptr<uchar>(y);
    for (int x = 0; x < image.cols; ++x) {
      if (mask[segments(y, x)]) continue;
      for (int c = 0; c < ch; ++c) {
        row[x * ch + c] = cv::saturate_cast<uchar>(fill[c]);
      }
    }
  }
  return out;
}

ExplanationMap LimeExplain(const cv::Mat& image, int class_index,
                           const ImagePredictor& predictor,
                           const LimeConfig& config, uint64_t seed) {
  if (image.depth() != CV_8U) throw ValidationError("LIME expects an 8-bit image");
  const Grid<int> segments = SegmentImage(image, config.n_segments);
  const int n_segments = SegmentCount(segments);
  if (n_segments < 2) {
    throw ValidationError("image yields fewer than 2 superpixels");
  }
  const cv::Scalar fill = cv::mean(image);
  const MaskPredictor mask_predictor = [&](const std::vector<Mask>& masks) {
    std::vector<cv::Mat> batch;
    batch.reserve(masks.size());
    for (const Mask& z : masks) batch.push_back(ApplyMask(image, segments, z, fill));
    const auto probs = predictor(batch);
    std::vector<double> out;
    out.reserve(probs.size());
    for (const auto& p : probs) out.push_back(p.at(class_index));
    return out;
  };
  const LimeSurrogate fit = ExplainMasks(mask_predictor, n_segments, config, seed);

  ExplanationMap map;
  map.method = ExplainMethod::kLime;
  map.class_index = class_index;
  map.segments = segments;
  map.segment_weights = fit.coefficients;
  map.values = RealGrid(image.rows, image.cols);
  for (size_t i = 0; i < segments.size(); ++i) {
    map.values.values()[i] = fit.coefficients[segments.values()[i]];
  }
  return map;
}

}  // namespace weldx::explain

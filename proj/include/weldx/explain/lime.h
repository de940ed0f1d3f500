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

#ifndef WELDX_EXPLAIN_LIME_H_
#define WELDX_EXPLAIN_LIME_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <opencv2/core.hpp>

#include "weldx/common/grid.h"
#include "weldx/common/random.h"
#include "weldx/explain/explanation_map.h"

namespace weldx::explain {

enum class MaskDistance { kCosine, kEuclidean };

struct LimeConfig {
  // Target superpixel count; the graph segmentation lands near it.
  int n_segments = 50;
  int n_samples = 1000;
  // Locality kernel width; defaults to 0.25 * sqrt(n_segments).
  std::optional<double> kernel_width;
  MaskDistance distance = MaskDistance::kCosine;
  // Segments outlined by RenderOverlay.
  int top_k_segments = 5;
  // First perturbation is the unperturbed image (all segments on).
  bool include_original = true;
  // Masked images are evaluated in batches of this size.
  int batch_size = 32;

  double KernelWidth() const;
  // ValidationError unless n_samples >= segments + 1 and all sizes are
  // positive.
  void Validate(int segments) const;
};

// Binary perturbation vector over superpixels; 1 keeps the segment.
using Mask = std::vector<uint8_t>;

// Distance between a perturbation and the unperturbed instance (all ones).
// Cosine distance of the all-zero mask is defined as 1.
double MaskDistanceToOriginal(const Mask& z, MaskDistance kind);

// pi(z) = exp(-D^2 / sigma^2).
double LocalityWeight(double distance, double kernel_width);

// n_samples masks, each bit uniform in {0, 1}.
std::vector<Mask> SampleMasks(int n_segments, int n_samples,
                              bool include_original, Rng& rng);

struct LimeSurrogate {
  double intercept = 0.0;
  std::vector<double> coefficients;
  // True when the normal equations were singular and a small ridge term was
  // added.
  bool ridge_fallback = false;
};

// Weighted least squares of targets on [1, z]. Never throws on a singular
// system; falls back to a ridge-regularized solve instead.
LimeSurrogate FitWeightedLinear(const std::vector<Mask>& masks,
                                const std::vector<double>& targets,
                                const std::vector<double>& weights);

// Model output for a batch of masks (one value per mask).
using MaskPredictor =
    std::function<std::vector<double>(const std::vector<Mask>&)>;

// Sampling, weighting and fitting over an abstract predictor; deterministic
// in `seed`.
LimeSurrogate ExplainMasks(const MaskPredictor& predictor, int n_segments,
                           const LimeConfig& config, uint64_t seed);

// Graph-based (Felzenszwalb) superpixels, with the scale searched so that
// the segment count lands near `target_segments`. Labels are 0..S-1 in
// raster order of first appearance.
Grid<int> SegmentImage(const cv::Mat& image, int target_segments);
int SegmentCount(const Grid<int>& segments);

// Replaces every pixel whose segment is off by the image's mean intensity
// (per channel).
cv::Mat ApplyMask(const cv::Mat& image, const Grid<int>& segments,
                  const Mask& mask, const cv::Scalar& fill);

// Class probabilities for a batch of images.
using ImagePredictor =
    std::function<std::vector<std::vector<double>>(const std::vector<cv::Mat>&)>;

// Full image-level LIME: segment, perturb, query `predictor` for the
// probability of `class_index`, fit the surrogate, and broadcast each
// segment's coefficient to its pixels. ValidationError if the image yields
// fewer than 2 superpixels.
ExplanationMap LimeExplain(const cv::Mat& image, int class_index,
                           const ImagePredictor& predictor,
                           const LimeConfig& config, uint64_t seed);

}  // namespace weldx::explain

#endif  // WELDX_EXPLAIN_LIME_H_

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

#ifndef WELDX_EXPLAIN_GRAD_CAM_H_
#define WELDX_EXPLAIN_GRAD_CAM_H_

#include <vector>

#include <torch/torch.h>

#include "weldx/common/grid.h"
#include "weldx/explain/explanation_map.h"
#include "weldx/trainer/model.h"

namespace weldx::explain {

// Target-layer activations A^k and the gradients of the class logit with
// respect to them, both (K, h, w).
struct GradCamIntermediate {
  torch::Tensor activations;
  torch::Tensor gradients;
};

// ReLU(sum_k alpha_k A^k) with alpha_k the spatial mean of the k-th
// gradient map. ValidationError on mismatched or non-3-D shapes. Fills
// `alphas` when given.
RealGrid GradCamFromIntermediate(const GradCamIntermediate& in,
                                 std::vector<double>* alphas = nullptr);

struct GradCamResult {
  // Unnormalized, bilinearly upsampled to the input size.
  ExplanationMap map;
  // At target-layer resolution.
  RealGrid cam;
  std::vector<double> alphas;
  GradCamIntermediate intermediate;
};

// Grad-CAM of the pre-softmax logit of `class_index` at the model's target
// layer, for a (3, H, W) or (1, 3, H, W) input. Runs in inference mode and
// leaves parameters and their gradients untouched. ConfigError if the
// target layer is not spatial; ValidationError on a bad class index.
GradCamResult GradCam(ClassifierNet& model, const torch::Tensor& input,
                      int class_index);

}  // namespace weldx::explain

#endif  // WELDX_EXPLAIN_GRAD_CAM_H_

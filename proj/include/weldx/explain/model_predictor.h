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

#ifndef WELDX_EXPLAIN_MODEL_PREDICTOR_H_
#define WELDX_EXPLAIN_MODEL_PREDICTOR_H_

#include <vector>

#include <opencv2/core.hpp>
#include <torch/torch.h>

#include "weldx/dataset/preprocess.h"
#include "weldx/explain/lime.h"
#include "weldx/trainer/model.h"

namespace weldx::explain {

// Softmax class probabilities, one row per image of a (N, 3, H, W) batch.
std::vector<std::vector<double>> PredictProbabilities(ClassifierNet& model,
                                                      const torch::Tensor& batch);

// LIME predictor: preprocesses each image with `spec` and returns softmax
// probabilities. Keeps a reference to `model`, which must outlive it.
ImagePredictor MakeImagePredictor(ClassifierNet& model,
                                  const dataset::PreprocessSpec& spec);

}  // namespace weldx::explain

#endif  // WELDX_EXPLAIN_MODEL_PREDICTOR_H_

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

#include "weldx/explain/model_predictor.h"

#include "weldx/common/error.h"
#include "weldx/trainer/train.h"

namespace weldx::explain {

std::vector<std::vector<double>> PredictProbabilities(ClassifierNet& model,
                                                      const torch::Tensor& batch) {
  if (batch.dim() != 4) throw ValidationError("expected a (N, 3, H, W) batch");
  const bool was_training = model.is_training();
  model.eval();
  torch::NoGradGuard no_grad;
  const torch::Tensor p =
      torch::softmax(model.forward(batch), 1).to(torch::kFloat64).contiguous();
  if (was_training) model.train(true);
  std::vector<std::vector<double>> out(p.size(0));
  const double* data = p.data_ptr<double>();
  for (int64_t i = 0; i < p.size(0); ++i) {
    out[i].assign(data + i * p.size(1), data + (i + 1) * p.size(1));
  }
  return out;
}

ImagePredictor MakeImagePredictor(ClassifierNet& model,
                                  const dataset::PreprocessSpec& spec) {
  return [&model, spec](const std::vector<cv::Mat>& images) {
    std::vector<torch::Tensor> tensors;
    tensors.reserve(images.size());
    for (const cv::Mat& m : images) tensors.push_back(ToTensor(dataset::Preprocess(m, spec)));
    return PredictProbabilities(model, torch::stack(tensors));
  };
}

}  // namespace weldx::explain

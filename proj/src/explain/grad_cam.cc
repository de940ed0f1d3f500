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

#include "weldx/explain/grad_cam.h"

#include <string>

#include "weldx/common/error.h"

namespace weldx::explain {

RealGrid GradCamFromIntermediate(const GradCamIntermediate& in,
                                 std::vector<double>* alphas) {
  const torch::Tensor& a = in.activations;
  const torch::Tensor& g = in.gradients;
  if (!a.defined() || !g.defined() || a.dim() != 3 || a.sizes() != g.sizes()) {
    throw ValidationError("activations and gradients must both be (K, h, w) of equal shape");
  }
  const torch::Tensor a64 = a.detach().to(torch::kFloat64).contiguous();
  const torch::Tensor alpha = g.detach().to(torch::kFloat64).mean({1, 2});
  const torch::Tensor cam =
      torch::relu((alpha.view({-1, 1, 1}) * a64).sum(0)).contiguous();
  if (alphas != nullptr) {
    alphas->assign(alpha.data_ptr<double>(), alpha.data_ptr<double>() + alpha.numel());
  }
  const int h = static_cast<int>(cam.size(0)), w = static_cast<int>(cam.size(1));
  return RealGrid(h, w, std::vector<double>(cam.data_ptr<double>(),
                                            cam.data_ptr<double>() + cam.numel()));
}

GradCamResult GradCam(ClassifierNet& model, const torch::Tensor& input,
                      int class_index) {
  torch::Tensor x = input.dim() == 3 ? input.unsqueeze(0) : input;
  if (x.dim() != 4 || x.size(0) != 1) {
    throw ValidationError("Grad-CAM expects a single (3, H, W) image");
  }
  if (class_index < 0 || class_index >= model.num_classes()) {
    throw ValidationError("class index " + std::to_string(class_index) +
                          " outside [0, " + std::to_string(model.num_classes()) + ")");
  }
  const bool was_training = model.is_training();
  model.eval();
  torch::AutoGradMode grad_mode(true);
  torch::Tensor features;
  {
    torch::NoGradGuard no_grad;
    features = model.Features(x);
  }
  if (features.dim() != 4) {
    throw ConfigError("target layer '" + model.TargetLayer() +
                      "' produces no spatial activations");
  }
  // A fresh leaf: gradients flow only through the head, whatever the
  // backbone's requires_grad flags are.
  features = features.detach().requires_grad_(true);
  const torch::Tensor logit = model.Head(features)[0][class_index];
  const torch::Tensor grad =
      torch::autograd::grad({logit}, {features}, {}, false, false)[0];
  if (was_training) model.train(true);

  GradCamResult out;
  out.intermediate = {features.detach()[0], grad.detach()[0]};
  out.cam = GradCamFromIntermediate(out.intermediate, &out.alphas);
  out.map.method = ExplainMethod::kGradCam;
  out.map.class_index = class_index;
  out.map.values = ResizeBilinear(out.cam, static_cast<int>(x.size(2)),
                                  static_cast<int>(x.size(3)));
  return out;
}

}  // namespace weldx::explain

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

#ifndef WELDX_TESTS_SUPPORT_TORCH_FIXTURES_H_
#define WELDX_TESTS_SUPPORT_TORCH_FIXTURES_H_

#include <string>
#include <utility>
#include <vector>

#include <torch/torch.h>

#include "weldx/trainer/model.h"

namespace weldx::testing {

// Linearly separable classes (at most 4): class k has a bright patch in
// quadrant k over Gaussian noise. Returns (N, 3, size, size) images and
// labels, classes interleaved.
inline std::pair<torch::Tensor, std::vector<int>> QuadrantImages(
    int n, int size, uint64_t seed, int classes = 4) {
  torch::Generator gen = torch::make_generator<torch::CPUGeneratorImpl>(seed);
  torch::Tensor x = 0.3 * torch::randn({n, 3, size, size}, gen);
  std::vector<int> labels(n);
  const int h = size / 2;
  for (int i = 0; i < n; ++i) {
    const int k = i % classes;
    labels[i] = k;
    const int r = (k / 2) * h, c = (k % 2) * h;
    x.index({i, torch::indexing::Slice(), torch::indexing::Slice(r, r + h),
             torch::indexing::Slice(c, c + h)})
        .add_(1.0);
  }
  return {x, labels};
}

// conv(3 -> k, 3x3, pad 1) + ReLU as the target layer, then global average
// pooling and a linear head.
class TinyCamNet : public ClassifierNet {
 public:
  TinyCamNet(int channels, int num_classes) : ClassifierNet(num_classes) {
    conv = register_module(
        "conv", torch::nn::Conv2d(torch::nn::Conv2dOptions(3, channels, 3).padding(1)));
    fc = register_module("fc", torch::nn::Linear(channels, num_classes));
  }
  torch::Tensor Features(const torch::Tensor& x) override {
    return torch::relu(conv->forward(x));
  }
  torch::Tensor Head(const torch::Tensor& f) override {
    return fc->forward(f.mean({2, 3}));
  }
  std::vector<std::string> HeadPrefixes() const override { return {"fc"}; }
  std::vector<std::vector<std::string>> BackboneBlocks() const override {
    return {{"conv"}};
  }
  std::string TargetLayer() const override { return "conv"; }

  torch::nn::Conv2d conv{nullptr};
  torch::nn::Linear fc{nullptr};
};

}  // namespace weldx::testing

#endif  // WELDX_TESTS_SUPPORT_TORCH_FIXTURES_H_

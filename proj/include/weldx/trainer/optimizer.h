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

#ifndef WELDX_TRAINER_OPTIMIZER_H_
#define WELDX_TRAINER_OPTIMIZER_H_

#include <memory>
#include <vector>

#include <torch/torch.h>

#include "weldx/trainer/ids.h"

namespace weldx {

// Updates a fixed set of parameters from their accumulated gradients.
class Optimizer {
 public:
  virtual ~Optimizer() = default;
  virtual void Step() = 0;
  void ZeroGrad();
  const std::vector<torch::Tensor>& params() const { return params_; }

 protected:
  explicit Optimizer(std::vector<torch::Tensor> params)
      : params_(std::move(params)) {}
  std::vector<torch::Tensor> params_;
};

// Standard update rules with their customary default constants; only the
// learning rate is configurable:
//   adam     betas (0.9, 0.999), eps 1e-8
//   adamw    betas (0.9, 0.999), eps 1e-8, weight decay 0.01
//   sgd      no momentum
//   rmsprop  alpha 0.99, eps 1e-8
//   adagrad  eps 1e-10
//   adadelta rho 0.9, eps 1e-6
//   adamax   betas (0.9, 0.999), eps 1e-8
// ValidationError if lr <= 0 or `params` is empty.
std::unique_ptr<Optimizer> BuildOptimizer(OptimizerId id,
                                          std::vector<torch::Tensor> params,
                                          double lr);

}  // namespace weldx

#endif  // WELDX_TRAINER_OPTIMIZER_H_

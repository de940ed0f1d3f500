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

#include "weldx/trainer/optimizer.h"

#include <cmath>
#include <string>

#include "weldx/common/error.h"

namespace weldx {

namespace {

namespace optim = torch::optim;

class TorchOptimizer : public Optimizer {
 public:
  TorchOptimizer(std::vector<torch::Tensor> params,
                 std::unique_ptr<optim::Optimizer> impl)
      : Optimizer(std::move(params)), impl_(std::move(impl)) {}
  void Step() override { impl_->step(); }

 private:
  std::unique_ptr<optim::Optimizer> impl_;
};

class Adadelta : public Optimizer {
 public:
  Adadelta(std::vector<torch::Tensor> params, double lr)
      : Optimizer(std::move(params)), lr_(lr) {
    for (const auto& p : params_) {
      square_avg_.push_back(torch::zeros_like(p));
      acc_delta_.push_back(torch::zeros_like(p));
    }
  }
  void Step() override {
    constexpr double kRho = 0.9, kEps = 1e-6;
    torch::NoGradGuard no_grad;
    for (size_t i = 0; i < params_.size(); ++i) {
      const torch::Tensor& g = params_[i].grad();
      if (!g.defined()) continue;
      square_avg_[i].mul_(kRho).addcmul_(g, g, 1 - kRho);
      const torch::Tensor delta =
          (acc_delta_[i] + kEps).sqrt_().div_((square_avg_[i] + kEps).sqrt_()).mul_(g);
      acc_delta_[i].mul_(kRho).addcmul_(delta, delta, 1 - kRho);
      params_[i].add_(delta, -lr_);
    }
  }

 private:
  double lr_;
  std::vector<torch::Tensor> square_avg_;
  std::vector<torch::Tensor> acc_delta_;
};

class Adamax : public Optimizer {
 public:
  Adamax(std::vector<torch::Tensor> params, double lr)
      : Optimizer(std::move(params)), lr_(lr) {
    for (const auto& p : params_) {
      exp_avg_.push_back(torch::zeros_like(p));
      exp_inf_.push_back(torch::zeros_like(p));
    }
  }
  void Step() override {
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
    torch::NoGradGuard no_grad;
    ++step_;
    const double clr = lr_ / (1 - std::pow(kBeta1, step_));
    for (size_t i = 0; i < params_.size(); ++i) {
      const torch::Tensor& g = params_[i].grad();
      if (!g.defined()) continue;
      exp_avg_[i].mul_(kBeta1).add_(g, 1 - kBeta1);
      exp_inf_[i] = torch::maximum(exp_inf_[i] * kBeta2, g.abs() + kEps);
      params_[i].addcdiv_(exp_avg_[i], exp_inf_[i], -clr);
    }
  }

 private:
  double lr_;
  int64_t step_ = 0;
  std::vector<torch::Tensor> exp_avg_;
  std::vector<torch::Tensor> exp_inf_;
};

}  // namespace

void Optimizer::ZeroGrad() {
  for (auto& p : params_) {
    if (p.grad().defined()) {
      p.grad().detach_();
      p.grad().zero_();
    }
  }
}

std::unique_ptr<Optimizer> BuildOptimizer(OptimizerId id,
                                          std::vector<torch::Tensor> params,
                                          double lr) {
  if (!(lr > 0.0) || !std::isfinite(lr)) {
    throw ValidationError("learning rate must be positive, got " + std::to_string(lr));
  }
  if (params.empty()) throw ValidationError("optimizer has no trainable parameters");
  std::unique_ptr<optim::Optimizer> impl;
  switch (id) {
    case OptimizerId::kAdam:
      impl = std::make_unique<optim::Adam>(params, optim::AdamOptions(lr));
      break;
    case OptimizerId::kAdamW:
      impl = std::make_unique<optim::AdamW>(
          params, optim::AdamWOptions(lr).weight_decay(0.01));
      break;
    case OptimizerId::kSgd:
      impl = std::make_unique<optim::SGD>(params, optim::SGDOptions(lr));
      break;
    case OptimizerId::kRmsprop:
      impl = std::make_unique<optim::RMSprop>(
          params, optim::RMSpropOptions(lr).alpha(0.99).eps(1e-8));
      break;
    case OptimizerId::kAdagrad:
      impl = std::make_unique<optim::Adagrad>(
          params, optim::AdagradOptions(lr).eps(1e-10));
      break;
    case OptimizerId::kAdadelta:
      return std::make_unique<Adadelta>(std::move(params), lr);
    case OptimizerId::kAdamax:
      return std::make_unique<Adamax>(std::move(params), lr);
  }
  if (!impl) throw ConfigError("unknown optimizer id");
  return std::make_unique<TorchOptimizer>(std::move(params), std::move(impl));
}

}  // namespace weldx

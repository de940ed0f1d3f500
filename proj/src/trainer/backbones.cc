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

#include <cmath>
#include <string>
#include <vector>

#include "weldx/common/error.h"
#include "weldx/trainer/model.h"

namespace weldx {

namespace {

namespace nn = torch::nn;
using torch::Tensor;

// Sequential container that can itself be nested in a Sequential.
class SeqImpl : public nn::SequentialImpl {
 public:
  using nn::SequentialImpl::SequentialImpl;
  Tensor forward(Tensor x) { return nn::SequentialImpl::forward(x); }
};
TORCH_MODULE(Seq);

nn::Conv2d Conv(int64_t in, int64_t out, int64_t kernel, int64_t stride = 1,
                int64_t padding = 0, int64_t groups = 1, bool bias = false) {
  return nn::Conv2d(nn::Conv2dOptions(in, out, kernel)
                        .stride(stride)
                        .padding(padding)
                        .groups(groups)
                        .bias(bias));
}

nn::BatchNorm2d Norm(int64_t channels, double eps = 1e-5) {
  return nn::BatchNorm2d(nn::BatchNorm2dOptions(channels).eps(eps));
}

enum class Act { kNone, kReLU, kReLU6, kSiLU };

// Conv (no bias) + batch norm + optional activation, "same" padding.
Seq ConvNormAct(int64_t in, int64_t out, int64_t kernel,
                           int64_t stride, int64_t groups, Act act,
                           double eps = 1e-5) {
  Seq seq;
  seq->push_back(Conv(in, out, kernel, stride, (kernel - 1) / 2, groups));
  seq->push_back(Norm(out, eps));
  switch (act) {
    case Act::kReLU:
      seq->push_back(nn::ReLU());
      break;
    case Act::kReLU6:
      seq->push_back(nn::ReLU6());
      break;
    case Act::kSiLU:
      seq->push_back(nn::SiLU());
      break;
    case Act::kNone:
      break;
  }
  return seq;
}

std::vector<std::string> Indexed(const std::string& prefix, int i) {
  return {prefix + "." + std::to_string(i)};
}

int64_t MakeDivisible(double v, int64_t divisor = 8) {
  int64_t nv = std::max<int64_t>(
      divisor, static_cast<int64_t>(v + divisor / 2.0) / divisor * divisor);
  if (nv < 0.9 * v) nv += divisor;
  return nv;
}

void ZeroBias(nn::Module& m) {
  for (auto& p : m.named_parameters(false)) {
    if (p.key() == "bias") p.value().zero_();
  }
}

// ---------------------------------------------------------------- ResNet

class BasicBlockImpl : public nn::Module {
 public:
  static constexpr int64_t kExpansion = 1;
  BasicBlockImpl(int64_t in, int64_t planes, int64_t stride, int64_t /*width*/)
      : conv1(register_module("conv1", Conv(in, planes, 3, stride, 1))),
        bn1(register_module("bn1", Norm(planes))),
        conv2(register_module("conv2", Conv(planes, planes, 3, 1, 1))),
        bn2(register_module("bn2", Norm(planes))) {
    if (stride != 1 || in != planes) {
      downsample = register_module(
          "downsample",
          Seq(Conv(in, planes, 1, stride), Norm(planes)));
    }
  }
  Tensor forward(Tensor x) {
    Tensor out = torch::relu(bn1(conv1(x)));
    out = bn2(conv2(out));
    out += downsample ? downsample->forward(x) : x;
    return torch::relu(out);
  }
  nn::Conv2d conv1;
  nn::BatchNorm2d bn1;
  nn::Conv2d conv2;
  nn::BatchNorm2d bn2;
  Seq downsample{nullptr};
};
TORCH_MODULE(BasicBlock);

class BottleneckImpl : public nn::Module {
 public:
  static constexpr int64_t kExpansion = 4;
  BottleneckImpl(int64_t in, int64_t planes, int64_t stride, int64_t width)
      : conv1(register_module("conv1", Conv(in, width, 1))),
        bn1(register_module("bn1", Norm(width))),
        conv2(register_module("conv2", Conv(width, width, 3, stride, 1))),
        bn2(register_module("bn2", Norm(width))),
        conv3(register_module("conv3", Conv(width, planes * kExpansion, 1))),
        bn3(register_module("bn3", Norm(planes * kExpansion))) {
    if (stride != 1 || in != planes * kExpansion) {
      downsample = register_module(
          "downsample", Seq(Conv(in, planes * kExpansion, 1, stride),
                                       Norm(planes * kExpansion)));
    }
  }
  Tensor forward(Tensor x) {
    Tensor out = torch::relu(bn1(conv1(x)));
    out = torch::relu(bn2(conv2(out)));
    out = bn3(conv3(out));
    out += downsample ? downsample->forward(x) : x;
    return torch::relu(out);
  }
  nn::Conv2d conv1;
  nn::BatchNorm2d bn1;
  nn::Conv2d conv2;
  nn::BatchNorm2d bn2;
  nn::Conv2d conv3;
  nn::BatchNorm2d bn3;
  Seq downsample{nullptr};
};
TORCH_MODULE(Bottleneck);

template <typename Block>
class ResNet : public ClassifierNet {
 public:
  ResNet(std::vector<int> layers, int64_t width_per_group, int num_classes)
      : ClassifierNet(num_classes), width_per_group_(width_per_group) {
    conv1_ = register_module("conv1", Conv(3, 64, 7, 2, 3));
    bn1_ = register_module("bn1", Norm(64));
    const int64_t planes[4] = {64, 128, 256, 512};
    for (int i = 0; i < 4; ++i) {
      stages_.push_back(register_module("layer" + std::to_string(i + 1),
                                        MakeLayer(planes[i], layers[i],
                                                  i == 0 ? 1 : 2)));
    }
    fc_ = register_module("fc", nn::Linear(512 * Block::ContainedType::kExpansion,
                                           num_classes));
    torch::NoGradGuard no_grad;
    for (auto& m : modules(false)) {
      if (auto* c = m->as<nn::Conv2d>()) {
        nn::init::kaiming_normal_(c->weight, 0.0, torch::kFanOut, torch::kReLU);
      } else if (auto* b = m->as<nn::BatchNorm2d>()) {
        b->weight.fill_(1.0);
        b->bias.zero_();
      }
    }
  }

  Tensor Features(const Tensor& x) override {
    Tensor y = torch::relu(bn1_(conv1_(x)));
    y = torch::max_pool2d(y, 3, 2, 1);
    for (auto& s : stages_) y = s->forward(y);
    return y;
  }
  Tensor Head(const Tensor& f) override {
    return fc_(torch::adaptive_avg_pool2d(f, {1, 1}).flatten(1));
  }
  std::vector<std::string> HeadPrefixes() const override { return {"fc"}; }
  std::vector<std::vector<std::string>> BackboneBlocks() const override {
    return {{"conv1", "bn1"}, {"layer1"}, {"layer2"}, {"layer3"}, {"layer4"}};
  }
  std::string TargetLayer() const override { return "layer4"; }

 private:
  Seq MakeLayer(int64_t planes, int blocks, int64_t stride) {
    Seq seq;
    const int64_t width = planes * width_per_group_ / 64;
    for (int i = 0; i < blocks; ++i) {
      seq->push_back(Block(in_, planes, i == 0 ? stride : 1, width));
      in_ = planes * Block::ContainedType::kExpansion;
    }
    return seq;
  }

  int64_t width_per_group_;
  int64_t in_ = 64;
  nn::Conv2d conv1_{nullptr};
  nn::BatchNorm2d bn1_{nullptr};
  std::vector<Seq> stages_;
  nn::Linear fc_{nullptr};
};

// -------------------------------------------------------------- DenseNet

class DenseLayerImpl : public nn::Module {
 public:
  DenseLayerImpl(int64_t in, int64_t growth, int64_t bn_size)
      : norm1(register_module("norm1", Norm(in))),
        conv1(register_module("conv1", Conv(in, bn_size * growth, 1))),
        norm2(register_module("norm2", Norm(bn_size * growth))),
        conv2(register_module("conv2", Conv(bn_size * growth, growth, 3, 1, 1))) {}
  Tensor forward(const Tensor& x) {
    Tensor y = conv1(torch::relu(norm1(x)));
    return conv2(torch::relu(norm2(y)));
  }
  nn::BatchNorm2d norm1;
  nn::Conv2d conv1;
  nn::BatchNorm2d norm2;
  nn::Conv2d conv2;
};
TORCH_MODULE(DenseLayer);

class DenseBlockImpl : public nn::Module {
 public:
  DenseBlockImpl(int layers, int64_t in, int64_t growth, int64_t bn_size) {
    for (int i = 0; i < layers; ++i) {
      layers_.push_back(register_module("denselayer" + std::to_string(i + 1),
                                        DenseLayer(in + i * growth, growth,
                                                   bn_size)));
    }
  }
  Tensor forward(Tensor x) {
    std::vector<Tensor> features = {x};
    for (auto& layer : layers_) features.push_back(layer(torch::cat(features, 1)));
    return torch::cat(features, 1);
  }

 private:
  std::vector<DenseLayer> layers_;
};
TORCH_MODULE(DenseBlock);

class TransitionImpl : public nn::Module {
 public:
  TransitionImpl(int64_t in, int64_t out)
      : norm(register_module("norm", Norm(in))),
        conv(register_module("conv", Conv(in, out, 1))) {}
  Tensor forward(Tensor x) {
    return torch::avg_pool2d(conv(torch::relu(norm(x))), 2, 2);
  }
  nn::BatchNorm2d norm;
  nn::Conv2d conv;
};
TORCH_MODULE(Transition);

class DenseNet121 : public ClassifierNet {
 public:
  explicit DenseNet121(int num_classes) : ClassifierNet(num_classes) {
    constexpr int64_t kGrowth = 32, kBnSize = 4;
    const int kBlocks[4] = {6, 12, 24, 16};
    Seq f;
    f->push_back("conv0", Conv(3, 64, 7, 2, 3));
    f->push_back("norm0", Norm(64));
    f->push_back("relu0", nn::ReLU());
    f->push_back("pool0",
                 nn::MaxPool2d(nn::MaxPool2dOptions(3).stride(2).padding(1)));
    int64_t ch = 64;
    for (int i = 0; i < 4; ++i) {
      f->push_back("denseblock" + std::to_string(i + 1),
                   DenseBlock(kBlocks[i], ch, kGrowth, kBnSize));
      ch += kBlocks[i] * kGrowth;
      if (i != 3) {
        f->push_back("transition" + std::to_string(i + 1), Transition(ch, ch / 2));
        ch /= 2;
      }
    }
    f->push_back("norm5", Norm(ch));
    features_ = register_module("features", f);
    classifier_ = register_module("classifier", nn::Linear(ch, num_classes));
    torch::NoGradGuard no_grad;
    for (auto& m : modules(false)) {
      if (auto* c = m->as<nn::Conv2d>()) {
        nn::init::kaiming_normal_(c->weight);
      } else if (auto* b = m->as<nn::BatchNorm2d>()) {
        b->weight.fill_(1.0);
        b->bias.zero_();
      }
    }
    classifier_->bias.zero_();
  }

  Tensor Features(const Tensor& x) override { return features_->forward(x); }
  Tensor Head(const Tensor& f) override {
    return classifier_(torch::adaptive_avg_pool2d(torch::relu(f), {1, 1}).flatten(1));
  }
  std::vector<std::string> HeadPrefixes() const override {
    return {"classifier"};
  }
  std::vector<std::vector<std::string>> BackboneBlocks() const override {
    return {{"features.conv0", "features.norm0"},
            {"features.denseblock1", "features.transition1"},
            {"features.denseblock2", "features.transition2"},
            {"features.denseblock3", "features.transition3"},
            {"features.denseblock4", "features.norm5"}};
  }
  std::string TargetLayer() const override { return "features.norm5"; }

 private:
  Seq features_{nullptr};
  nn::Linear classifier_{nullptr};
};

// ---------------------------------------------------------- EfficientNet

Tensor StochasticDepth(const Tensor& x, double p, bool training) {
  if (!training || p == 0.0) return x;
  const double survival = 1.0 - p;
  Tensor noise = torch::empty({x.size(0), 1, 1, 1}, x.options()).bernoulli_(survival);
  if (survival > 0.0) noise.div_(survival);
  return x * noise;
}

class SqueezeExcitationImpl : public nn::Module {
 public:
  SqueezeExcitationImpl(int64_t in, int64_t squeeze)
      : fc1(register_module("fc1", Conv(in, squeeze, 1, 1, 0, 1, true))),
        fc2(register_module("fc2", Conv(squeeze, in, 1, 1, 0, 1, true))) {}
  Tensor forward(Tensor x) {
    Tensor s = torch::adaptive_avg_pool2d(x, {1, 1});
    s = torch::sigmoid(fc2(torch::silu(fc1(s))));
    return s * x;
  }
  nn::Conv2d fc1;
  nn::Conv2d fc2;
};
TORCH_MODULE(SqueezeExcitation);

struct StageConfig {
  bool fused;
  double expand_ratio;
  int64_t kernel;
  int64_t stride;
  int64_t in;
  int64_t out;
  int layers;
};

class MBConvImpl : public nn::Module {
 public:
  MBConvImpl(const StageConfig& c, double sd_prob, double eps)
      : residual_(c.stride == 1 && c.in == c.out), sd_prob_(sd_prob) {
    const int64_t expanded = MakeDivisible(c.in * c.expand_ratio);
    Seq seq;
    if (c.fused) {
      if (expanded != c.in) {
        seq->push_back(ConvNormAct(c.in, expanded, c.kernel, c.stride, 1, Act::kSiLU, eps));
        seq->push_back(ConvNormAct(expanded, c.out, 1, 1, 1, Act::kNone, eps));
      } else {
        seq->push_back(ConvNormAct(c.in, c.out, c.kernel, c.stride, 1, Act::kSiLU, eps));
      }
    } else {
      if (expanded != c.in) {
        seq->push_back(ConvNormAct(c.in, expanded, 1, 1, 1, Act::kSiLU, eps));
      }
      seq->push_back(ConvNormAct(expanded, expanded, c.kernel, c.stride, expanded,
                                 Act::kSiLU, eps));
      seq->push_back(SqueezeExcitation(expanded, std::max<int64_t>(1, c.in / 4)));
      seq->push_back(ConvNormAct(expanded, c.out, 1, 1, 1, Act::kNone, eps));
    }
    block_ = register_module("block", seq);
  }
  Tensor forward(Tensor x) {
    Tensor y = block_->forward(x);
    if (residual_) y = StochasticDepth(y, sd_prob_, is_training()) + x;
    return y;
  }

 private:
  bool residual_;
  double sd_prob_;
  Seq block_{nullptr};
};
TORCH_MODULE(MBConv);

class EfficientNet : public ClassifierNet {
 public:
  EfficientNet(const std::vector<StageConfig>& stages, int64_t last_channel,
               double eps, double dropout, int num_classes)
      : ClassifierNet(num_classes) {
    constexpr double kStochasticDepth = 0.2;
    Seq f;
    f->push_back(ConvNormAct(3, stages.front().in, 3, 2, 1, Act::kSiLU, eps));
    int total = 0;
    for (const StageConfig& s : stages) total += s.layers;
    int block_id = 0;
    for (const StageConfig& s : stages) {
      Seq stage;
      for (int i = 0; i < s.layers; ++i) {
        StageConfig c = s;
        if (i > 0) {
          c.in = c.out;
          c.stride = 1;
        }
        stage->push_back(MBConv(c, kStochasticDepth * block_id / total, eps));
        ++block_id;
      }
      f->push_back(stage);
    }
    f->push_back(ConvNormAct(stages.back().out, last_channel, 1, 1, 1, Act::kSiLU, eps));
    num_feature_blocks_ = static_cast<int>(stages.size()) + 2;
    features_ = register_module("features", f);
    Seq cls;
    cls->push_back(nn::Dropout(dropout));
    linear_ = nn::Linear(last_channel, num_classes);
    cls->push_back(linear_);
    classifier_ = register_module("classifier", cls);
    torch::NoGradGuard no_grad;
    for (auto& m : modules(false)) {
      if (auto* c = m->as<nn::Conv2d>()) {
        nn::init::kaiming_normal_(c->weight, 0.0, torch::kFanOut);
        ZeroBias(*c);
      } else if (auto* b = m->as<nn::BatchNorm2d>()) {
        b->weight.fill_(1.0);
        b->bias.zero_();
      }
    }
    const double range = 1.0 / std::sqrt(static_cast<double>(num_classes));
    linear_->weight.uniform_(-range, range);
    linear_->bias.zero_();
  }

  Tensor Features(const Tensor& x) override { return features_->forward(x); }
  Tensor Head(const Tensor& f) override {
    return classifier_->forward(torch::adaptive_avg_pool2d(f, {1, 1}).flatten(1));
  }
  std::vector<std::string> HeadPrefixes() const override {
    return {"classifier"};
  }
  std::vector<std::vector<std::string>> BackboneBlocks() const override {
    std::vector<std::vector<std::string>> blocks;
    for (int i = 0; i < num_feature_blocks_; ++i) blocks.push_back(Indexed("features", i));
    return blocks;
  }
  std::string TargetLayer() const override {
    return "features." + std::to_string(num_feature_blocks_ - 1);
  }

 private:
  int num_feature_blocks_ = 0;
  Seq features_{nullptr};
  Seq classifier_{nullptr};
  nn::Linear linear_{nullptr};
};

// ----------------------------------------------------------- MobileNetV2

class InvertedResidualImpl : public nn::Module {
 public:
  InvertedResidualImpl(int64_t in, int64_t out, int64_t stride, int64_t expand)
      : residual_(stride == 1 && in == out) {
    const int64_t hidden = in * expand;
    Seq seq;
    if (expand != 1) seq->push_back(ConvNormAct(in, hidden, 1, 1, 1, Act::kReLU6));
    seq->push_back(ConvNormAct(hidden, hidden, 3, stride, hidden, Act::kReLU6));
    seq->push_back(Conv(hidden, out, 1));
    seq->push_back(Norm(out));
    conv_ = register_module("conv", seq);
  }
  Tensor forward(Tensor x) {
    return residual_ ? x + conv_->forward(x) : conv_->forward(x);
  }

 private:
  bool residual_;
  Seq conv_{nullptr};
};
TORCH_MODULE(InvertedResidual);

class MobileNetV2 : public ClassifierNet {
 public:
  explicit MobileNetV2(int num_classes) : ClassifierNet(num_classes) {
    const int64_t kSetting[7][4] = {{1, 16, 1, 1}, {6, 24, 2, 2}, {6, 32, 3, 2},
                                    {6, 64, 4, 2}, {6, 96, 3, 1}, {6, 160, 3, 2},
                                    {6, 320, 1, 1}};
    Seq f;
    int64_t in = 32;
    f->push_back(ConvNormAct(3, in, 3, 2, 1, Act::kReLU6));
    for (const auto& s : kSetting) {
      for (int64_t i = 0; i < s[2]; ++i) {
        f->push_back(InvertedResidual(in, s[1], i == 0 ? s[3] : 1, s[0]));
        in = s[1];
      }
    }
    f->push_back(ConvNormAct(in, 1280, 1, 1, 1, Act::kReLU6));
    num_feature_blocks_ = static_cast<int>(f->size());
    features_ = register_module("features", f);
    Seq cls;
    cls->push_back(nn::Dropout(0.2));
    linear_ = nn::Linear(1280, num_classes);
    cls->push_back(linear_);
    classifier_ = register_module("classifier", cls);
    torch::NoGradGuard no_grad;
    for (auto& m : modules(false)) {
      if (auto* c = m->as<nn::Conv2d>()) {
        nn::init::kaiming_normal_(c->weight, 0.0, torch::kFanOut);
      } else if (auto* b = m->as<nn::BatchNorm2d>()) {
        b->weight.fill_(1.0);
        b->bias.zero_();
      }
    }
    linear_->weight.normal_(0.0, 0.01);
    linear_->bias.zero_();
  }

  Tensor Features(const Tensor& x) override { return features_->forward(x); }
  Tensor Head(const Tensor& f) override {
    return classifier_->forward(torch::adaptive_avg_pool2d(f, {1, 1}).flatten(1));
  }
  std::vector<std::string> HeadPrefixes() const override {
    return {"classifier"};
  }
  std::vector<std::vector<std::string>> BackboneBlocks() const override {
    std::vector<std::vector<std::string>> blocks;
    for (int i = 0; i < num_feature_blocks_; ++i) blocks.push_back(Indexed("features", i));
    return blocks;
  }
  std::string TargetLayer() const override {
    return "features." + std::to_string(num_feature_blocks_ - 1);
  }

 private:
  int num_feature_blocks_ = 0;
  Seq features_{nullptr};
  Seq classifier_{nullptr};
  nn::Linear linear_{nullptr};
};

// ----------------------------------------------------------- ShuffleNetV2

Tensor ChannelShuffle(const Tensor& x, int64_t groups) {
  const int64_t n = x.size(0), c = x.size(1), h = x.size(2), w = x.size(3);
  return x.view({n, groups, c / groups, h, w})
      .transpose(1, 2)
      .contiguous()
      .view({n, c, h, w});
}

class ShuffleUnitImpl : public nn::Module {
 public:
  ShuffleUnitImpl(int64_t in, int64_t out, int64_t stride) : stride_(stride) {
    const int64_t bf = out / 2;
    if (stride > 1) {
      Seq b1;
      b1->push_back(Conv(in, in, 3, stride, 1, in));
      b1->push_back(Norm(in));
      b1->push_back(Conv(in, bf, 1));
      b1->push_back(Norm(bf));
      b1->push_back(nn::ReLU());
      branch1_ = register_module("branch1", b1);
    }
    Seq b2;
    b2->push_back(Conv(stride > 1 ? in : bf, bf, 1));
    b2->push_back(Norm(bf));
    b2->push_back(nn::ReLU());
    b2->push_back(Conv(bf, bf, 3, stride, 1, bf));
    b2->push_back(Norm(bf));
    b2->push_back(Conv(bf, bf, 1));
    b2->push_back(Norm(bf));
    b2->push_back(nn::ReLU());
    branch2_ = register_module("branch2", b2);
  }
  Tensor forward(Tensor x) {
    Tensor out;
    if (stride_ == 1) {
      auto halves = x.chunk(2, 1);
      out = torch::cat({halves[0], branch2_->forward(halves[1])}, 1);
    } else {
      out = torch::cat({branch1_->forward(x), branch2_->forward(x)}, 1);
    }
    return ChannelShuffle(out, 2);
  }

 private:
  int64_t stride_;
  Seq branch1_{nullptr};
  Seq branch2_{nullptr};
};
TORCH_MODULE(ShuffleUnit);

class ShuffleNetV2 : public ClassifierNet {
 public:
  ShuffleNetV2(std::vector<int> repeats, std::vector<int64_t> channels,
               int num_classes)
      : ClassifierNet(num_classes) {
    conv1_ = register_module("conv1", ConvNormAct(3, channels[0], 3, 2, 1, Act::kReLU));
    int64_t in = channels[0];
    for (int s = 0; s < 3; ++s) {
      Seq stage;
      stage->push_back(ShuffleUnit(in, channels[s + 1], 2));
      for (int i = 1; i < repeats[s]; ++i) {
        stage->push_back(ShuffleUnit(channels[s + 1], channels[s + 1], 1));
      }
      stages_.push_back(register_module("stage" + std::to_string(s + 2), stage));
      in = channels[s + 1];
    }
    conv5_ = register_module("conv5", ConvNormAct(in, channels[4], 1, 1, 1, Act::kReLU));
    fc_ = register_module("fc", nn::Linear(channels[4], num_classes));
  }

  Tensor Features(const Tensor& x) override {
    Tensor y = torch::max_pool2d(conv1_->forward(x), 3, 2, 1);
    for (auto& s : stages_) y = s->forward(y);
    return conv5_->forward(y);
  }
  Tensor Head(const Tensor& f) override { return fc_(f.mean({2, 3})); }
  std::vector<std::string> HeadPrefixes() const override { return {"fc"}; }
  std::vector<std::vector<std::string>> BackboneBlocks() const override {
    return {{"conv1"}, {"stage2"}, {"stage3"}, {"stage4"}, {"conv5"}};
  }
  std::string TargetLayer() const override { return "conv5"; }

 private:
  Seq conv1_{nullptr};
  std::vector<Seq> stages_;
  Seq conv5_{nullptr};
  nn::Linear fc_{nullptr};
};

// ------------------------------------------------------------ SqueezeNet

class FireImpl : public nn::Module {
 public:
  FireImpl(int64_t in, int64_t squeeze, int64_t e1, int64_t e3)
      : squeeze_(register_module("squeeze", Conv(in, squeeze, 1, 1, 0, 1, true))),
        expand1x1_(register_module("expand1x1", Conv(squeeze, e1, 1, 1, 0, 1, true))),
        expand3x3_(register_module("expand3x3", Conv(squeeze, e3, 3, 1, 1, 1, true))) {}
  Tensor forward(Tensor x) {
    Tensor s = torch::relu(squeeze_(x));
    return torch::cat({torch::relu(expand1x1_(s)), torch::relu(expand3x3_(s))}, 1);
  }

 private:
  nn::Conv2d squeeze_;
  nn::Conv2d expand1x1_;
  nn::Conv2d expand3x3_;
};
TORCH_MODULE(Fire);

class SqueezeNet10 : public ClassifierNet {
 public:
  explicit SqueezeNet10(int num_classes) : ClassifierNet(num_classes) {
    auto pool = [] {
      return nn::MaxPool2d(nn::MaxPool2dOptions(3).stride(2).ceil_mode(true));
    };
    Seq f;
    f->push_back(Conv(3, 96, 7, 2, 0, 1, true));
    f->push_back(nn::ReLU());
    f->push_back(pool());
    f->push_back(Fire(96, 16, 64, 64));
    f->push_back(Fire(128, 16, 64, 64));
    f->push_back(Fire(128, 32, 128, 128));
    f->push_back(pool());
    f->push_back(Fire(256, 32, 128, 128));
    f->push_back(Fire(256, 48, 192, 192));
    f->push_back(Fire(384, 48, 192, 192));
    f->push_back(Fire(384, 64, 256, 256));
    f->push_back(pool());
    f->push_back(Fire(512, 64, 256, 256));
    features_ = register_module("features", f);
    final_conv_ = Conv(512, num_classes, 1, 1, 0, 1, true);
    Seq cls;
    cls->push_back(nn::Dropout(0.5));
    cls->push_back(final_conv_);
    cls->push_back(nn::ReLU());
    classifier_ = register_module("classifier", cls);
    torch::NoGradGuard no_grad;
    for (auto& m : modules(false)) {
      if (auto* c = m->as<nn::Conv2d>()) {
        nn::init::kaiming_uniform_(c->weight);
        ZeroBias(*c);
      }
    }
    final_conv_->weight.normal_(0.0, 0.01);
  }

  Tensor Features(const Tensor& x) override { return features_->forward(x); }
  Tensor Head(const Tensor& f) override {
    return torch::adaptive_avg_pool2d(classifier_->forward(f), {1, 1}).flatten(1);
  }
  std::vector<std::string> HeadPrefixes() const override {
    return {"classifier"};
  }
  std::vector<std::vector<std::string>> BackboneBlocks() const override {
    std::vector<std::vector<std::string>> blocks;
    for (int i : {0, 3, 4, 5, 7, 8, 9, 10, 12}) blocks.push_back(Indexed("features", i));
    return blocks;
  }
  std::string TargetLayer() const override { return "features.12"; }

 private:
  Seq features_{nullptr};
  Seq classifier_{nullptr};
  nn::Conv2d final_conv_{nullptr};
};

ModelPtr Construct(ArchitectureId arch, int num_classes) {
  switch (arch) {
    case ArchitectureId::kResnet18:
      return std::make_shared<ResNet<BasicBlock>>(std::vector<int>{2, 2, 2, 2},
                                                  64, num_classes);
    case ArchitectureId::kWideResnet50_2:
      return std::make_shared<ResNet<Bottleneck>>(std::vector<int>{3, 4, 6, 3},
                                                  128, num_classes);
    case ArchitectureId::kDensenet121:
      return std::make_shared<DenseNet121>(num_classes);
    case ArchitectureId::kEfficientnetB0:
      return std::make_shared<EfficientNet>(
          std::vector<StageConfig>{{false, 1, 3, 1, 32, 16, 1},
                                   {false, 6, 3, 2, 16, 24, 2},
                                   {false, 6, 5, 2, 24, 40, 2},
                                   {false, 6, 3, 2, 40, 80, 3},
                                   {false, 6, 5, 1, 80, 112, 3},
                                   {false, 6, 5, 2, 112, 192, 4},
                                   {false, 6, 3, 1, 192, 320, 1}},
          1280, 1e-5, 0.2, num_classes);
    case ArchitectureId::kEfficientnetV2S:
      return std::make_shared<EfficientNet>(
          std::vector<StageConfig>{{true, 1, 3, 1, 24, 24, 2},
                                   {true, 4, 3, 2, 24, 48, 4},
                                   {true, 4, 3, 2, 48, 64, 4},
                                   {false, 4, 3, 2, 64, 128, 6},
                                   {false, 6, 3, 1, 128, 160, 9},
                                   {false, 6, 3, 2, 160, 256, 15}},
          1280, 1e-3, 0.2, num_classes);
    case ArchitectureId::kMobilenetV2:
      return std::make_shared<MobileNetV2>(num_classes);
    case ArchitectureId::kShufflenetV2X0_5:
      return std::make_shared<ShuffleNetV2>(std::vector<int>{4, 8, 4},
                                            std::vector<int64_t>{24, 48, 96, 192, 1024},
                                            num_classes);
    case ArchitectureId::kSqueezenet1_0:
      return std::make_shared<SqueezeNet10>(num_classes);
  }
  throw ConfigError("unknown architecture id");
}

}  // namespace

ModelPtr BuildModel(ArchitectureId arch, const ModelOptions& options) {
  if (options.num_classes < 2) {
    throw ValidationError("num_classes must be >= 2, got " +
                          std::to_string(options.num_classes));
  }
  ModelPtr model = Construct(arch, options.num_classes);
  if (options.pretrained) {
    const std::filesystem::path file =
        options.weights_dir / (std::string(Name(arch)) + ".pt");
    if (options.weights_dir.empty() || !std::filesystem::exists(file)) {
      throw ConfigError("pretrained weights requested but '" + file.string() +
                        "' does not exist; convert them with "
                        "tools/convert_torchvision_weights.py");
    }
    LoadStateDict(*model, ReadTensorDict(file), model->HeadPrefixes());
  }
  return model;
}

}  // namespace weldx

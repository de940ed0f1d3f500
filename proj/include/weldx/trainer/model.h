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

#ifndef WELDX_TRAINER_MODEL_H_
#define WELDX_TRAINER_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "weldx/common/jsonl.h"
#include "weldx/trainer/ids.h"

namespace weldx {

// Image classifier split at its Grad-CAM target layer: forward(x) is
// Head(Features(x)). Parameter names follow the torchvision layout of the
// same architecture so that converted weight files load by name.
class ClassifierNet : public torch::nn::Module {
 public:
  // Activations of the target layer, (N, K, h, w).
  virtual torch::Tensor Features(const torch::Tensor& x) = 0;
  // Logits, (N, num_classes).
  virtual torch::Tensor Head(const torch::Tensor& features) = 0;
  torch::Tensor forward(const torch::Tensor& x) { return Head(Features(x)); }

  // Parameter-name prefixes of the replaceable classifier head.
  virtual std::vector<std::string> HeadPrefixes() const = 0;
  // Top-level backbone blocks in input-to-output order, each given by the
  // parameter-name prefixes it owns. The stem is the first block.
  virtual std::vector<std::vector<std::string>> BackboneBlocks() const = 0;
  // Module whose output Features() returns.
  virtual std::string TargetLayer() const = 0;

  int num_classes() const { return num_classes_; }

 protected:
  explicit ClassifierNet(int num_classes) : num_classes_(num_classes) {}

 private:
  int num_classes_;
};

using ModelPtr = std::shared_ptr<ClassifierNet>;

struct ModelOptions {
  int num_classes = 4;
  // Loads `<weights_dir>/<arch>.pt` (see tools/convert_torchvision_weights.py)
  // into every non-head parameter and buffer.
  bool pretrained = false;
  std::filesystem::path weights_dir;
};

// ValidationError if num_classes < 2; ConfigError if pretrained weights are
// requested but the file is missing or does not match the architecture.
ModelPtr BuildModel(ArchitectureId arch, const ModelOptions& options);

// True if `name` equals `prefix` or starts with `prefix` + ".".
bool HasPrefix(const std::string& name, const std::string& prefix);
bool IsHeadParameter(const ClassifierNet& model, const std::string& name);

// Architecture -> parameter-name prefixes frozen by freeze_early_layers.
using FreezeTable = std::map<ArchitectureId, std::vector<std::string>>;

// The first ceil(n/2) of each architecture's n top-level backbone blocks
// (stem included), e.g. conv1/bn1/layer1/layer2 for resnet18.
const FreezeTable& DefaultFreezeTable();
// {"resnet18": ["conv1", ...], ...}; listed architectures replace the
// defaults, others keep them.
FreezeTable FreezeTableFromJson(const Json& j);
Json ToJson(const FreezeTable& table);

struct ParameterCounts {
  int64_t total = 0;
  int64_t trainable = 0;
  int64_t head = 0;
};

// Sets requires_grad per transfer mode: freeze_all leaves only the head
// trainable, fine_tune_all everything, freeze_early_layers everything except
// the table's prefixes for this architecture.
void ApplyTransferMode(ClassifierNet& model, ArchitectureId arch,
                       TransferMode mode,
                       const FreezeTable& table = DefaultFreezeTable());

ParameterCounts CountParameters(const ClassifierNet& model);
std::vector<torch::Tensor> TrainableParameters(const ClassifierNet& model);

// Puts the model in training mode, except batch-norm layers whose
// parameters are all frozen, which stay in inference mode so their running
// statistics do not drift.
void SetTrainingMode(ClassifierNet& model);

// Name -> tensor for every parameter and buffer.
std::map<std::string, torch::Tensor> StateDict(const ClassifierNet& model);
// Copies matching tensors into the model. ConfigError on a missing key or a
// shape mismatch; keys matching `skip_prefixes` are ignored on both sides.
void LoadStateDict(ClassifierNet& model,
                   const std::map<std::string, torch::Tensor>& state,
                   const std::vector<std::string>& skip_prefixes = {});

// Reads a plain {name: tensor} dict written by torch.save.
std::map<std::string, torch::Tensor> ReadTensorDict(
    const std::filesystem::path& file);
void WriteTensorDict(const std::map<std::string, torch::Tensor>& tensors,
                     const std::filesystem::path& file);

}  // namespace weldx

#endif  // WELDX_TRAINER_MODEL_H_

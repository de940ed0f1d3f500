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

#include "weldx/trainer/ids.h"

#include "weldx/common/error.h"

namespace weldx {

std::string_view Name(ArchitectureId id) {
  switch (id) {
    case ArchitectureId::kResnet18: return "resnet18";
    case ArchitectureId::kDensenet121: return "densenet121";
    case ArchitectureId::kEfficientnetB0: return "efficientnet_b0";
    case ArchitectureId::kEfficientnetV2S: return "efficientnet_v2_s";
    case ArchitectureId::kMobilenetV2: return "mobilenet_v2";
    case ArchitectureId::kWideResnet50_2: return "wide_resnet50_2";
    case ArchitectureId::kShufflenetV2X0_5: return "shufflenet_v2_x0_5";
    case ArchitectureId::kSqueezenet1_0: return "squeezenet1_0";
  }
  return "?";
}

std::string_view Name(TransferMode mode) {
  switch (mode) {
    case TransferMode::kFreezeEarlyLayers: return "freeze_early_layers";
    case TransferMode::kFreezeAll: return "freeze_all";
    case TransferMode::kFineTuneAll: return "fine_tune_all";
  }
  return "?";
}

std::string_view Name(OptimizerId id) {
  switch (id) {
    case OptimizerId::kAdam: return "adam";
    case OptimizerId::kAdamW: return "adamw";
    case OptimizerId::kSgd: return "sgd";
    case OptimizerId::kRmsprop: return "rmsprop";
    case OptimizerId::kAdagrad: return "adagrad";
    case OptimizerId::kAdadelta: return "adadelta";
    case OptimizerId::kAdamax: return "adamax";
  }
  return "?";
}

ArchitectureId ParseArchitecture(std::string_view name) {
  for (ArchitectureId id : kAllArchitectures) {
    if (Name(id) == name) return id;
  }
  throw ConfigError("unknown architecture '" + std::string(name) + "'");
}

TransferMode ParseTransferMode(std::string_view name) {
  for (TransferMode m : kAllTransferModes) {
    if (Name(m) == name) return m;
  }
  throw ConfigError("unknown transfer mode '" + std::string(name) + "'");
}

OptimizerId ParseOptimizer(std::string_view name) {
  for (OptimizerId id : kAllOptimizers) {
    if (Name(id) == name) return id;
  }
  throw ConfigError("unknown optimizer '" + std::string(name) + "'");
}

}  // namespace weldx

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

#ifndef WELDX_TRAINER_IDS_H_
#define WELDX_TRAINER_IDS_H_

#include <array>
#include <string>
#include <string_view>

namespace weldx {

enum class ArchitectureId {
  kResnet18,
  kDensenet121,
  kEfficientnetB0,
  kEfficientnetV2S,
  kMobilenetV2,
  kWideResnet50_2,
  kShufflenetV2X0_5,
  kSqueezenet1_0,
};

enum class TransferMode { kFreezeEarlyLayers, kFreezeAll, kFineTuneAll };

enum class OptimizerId {
  kAdam,
  kAdamW,
  kSgd,
  kRmsprop,
  kAdagrad,
  kAdadelta,
  kAdamax,
};

inline constexpr std::array<ArchitectureId, 8> kAllArchitectures = {
    ArchitectureId::kResnet18,        ArchitectureId::kDensenet121,
    ArchitectureId::kEfficientnetB0,  ArchitectureId::kEfficientnetV2S,
    ArchitectureId::kMobilenetV2,     ArchitectureId::kWideResnet50_2,
    ArchitectureId::kShufflenetV2X0_5, ArchitectureId::kSqueezenet1_0};

inline constexpr std::array<TransferMode, 3> kAllTransferModes = {
    TransferMode::kFreezeEarlyLayers, TransferMode::kFreezeAll,
    TransferMode::kFineTuneAll};

inline constexpr std::array<OptimizerId, 7> kAllOptimizers = {
    OptimizerId::kAdam,    OptimizerId::kAdamW,    OptimizerId::kSgd,
    OptimizerId::kRmsprop, OptimizerId::kAdagrad,  OptimizerId::kAdadelta,
    OptimizerId::kAdamax};

// Canonical lowercase names ("densenet121", "fine_tune_all", "adamw").
std::string_view Name(ArchitectureId id);
std::string_view Name(TransferMode mode);
std::string_view Name(OptimizerId id);

// Inverse of Name(); ConfigError on an unknown name.
ArchitectureId ParseArchitecture(std::string_view name);
TransferMode ParseTransferMode(std::string_view name);
OptimizerId ParseOptimizer(std::string_view name);

}  // namespace weldx

#endif  // WELDX_TRAINER_IDS_H_

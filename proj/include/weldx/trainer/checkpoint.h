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

#ifndef WELDX_TRAINER_CHECKPOINT_H_
#define WELDX_TRAINER_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "weldx/common/jsonl.h"
#include "weldx/dataset/preprocess.h"
#include "weldx/trainer/ids.h"
#include "weldx/trainer/model.h"
#include "weldx/trainer/report.h"

namespace weldx {

struct CheckpointInfo {
  ArchitectureId arch = ArchitectureId::kResnet18;
  std::vector<std::string> class_names;
  dataset::PreprocessSpec preprocess;
  // Free-form description of the run that produced the weights, e.g. the
  // trial configuration.
  Json config = Json::object();
  TrainReport report;
};

// `trial_<id>.ckpt`.
std::string CheckpointFileName(int64_t trial_id);

// One archive holding the weights, the report and the metadata needed to
// rebuild the model. The file is a torch.save-compatible zip holding
// {"format", "info" (JSON text), "state" ({name: tensor})}.
void SaveCheckpoint(const std::filesystem::path& file,
                    const ClassifierNet& model, const CheckpointInfo& info);

struct LoadedCheckpoint {
  ModelPtr model;
  CheckpointInfo info;
};

// The model is returned in inference mode. ConfigError on a malformed file.
LoadedCheckpoint LoadCheckpoint(const std::filesystem::path& file);

}  // namespace weldx

#endif  // WELDX_TRAINER_CHECKPOINT_H_

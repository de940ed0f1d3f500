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

#ifndef WELDX_SEARCH_TRIAL_RUNNER_H_
#define WELDX_SEARCH_TRIAL_RUNNER_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "weldx/dataset/preprocess.h"
#include "weldx/search/study.h"
#include "weldx/trainer/early_stopping.h"
#include "weldx/trainer/model.h"
#include "weldx/trainer/train.h"

namespace weldx::search {

struct TrialData {
  ImageDataset train;
  ImageDataset val;
  std::vector<std::string> class_names;
  dataset::PreprocessSpec preprocess;
};

struct TorchRunnerOptions {
  EarlyStoppingOptions budget;
  bool pretrained = false;
  std::filesystem::path weights_dir;
  FreezeTable freeze_table = DefaultFreezeTable();
  // When set, every trial writes `trial_<id>.ckpt` here.
  std::optional<std::filesystem::path> checkpoint_dir;
};

struct TrainedTrial {
  ModelPtr model;
  TrainReport report;
};

// build_model -> apply_transfer_mode -> build_optimizer ->
// train_with_early_stopping for one configuration, seeded by config.seed.
TrainedTrial TrainTrial(const TrialConfig& config, const TrialData& data,
                        const TorchRunnerOptions& options);

// Study runner over TrainTrial.
TrialRunner MakeTorchTrialRunner(std::shared_ptr<const TrialData> data,
                                 TorchRunnerOptions options);

}  // namespace weldx::search

#endif  // WELDX_SEARCH_TRIAL_RUNNER_H_

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

#include "weldx/search/trial_runner.h"

#include "weldx/trainer/checkpoint.h"

namespace weldx::search {

TrainedTrial TrainTrial(const TrialConfig& config, const TrialData& data,
                        const TorchRunnerOptions& options) {
  torch::manual_seed(config.seed);
  ModelOptions model_options;
  model_options.num_classes = static_cast<int>(data.class_names.size());
  model_options.pretrained = options.pretrained;
  model_options.weights_dir = options.weights_dir;
  TrainedTrial out;
  out.model = BuildModel(config.arch, model_options);
  ApplyTransferMode(*out.model, config.arch, config.mode, options.freeze_table);
  TrainOptions train_options;
  train_options.stopping = options.budget;
  train_options.batch_size = config.batch_size;
  train_options.seed = config.seed;
  out.report = TrainWithEarlyStopping(*out.model, data.train, data.val,
                                      config.opt, config.lr, train_options);
  if (options.checkpoint_dir) {
    CheckpointInfo info;
    info.arch = config.arch;
    info.class_names = data.class_names;
    info.preprocess = data.preprocess;
    info.config = ToJson(config);
    info.report = out.report;
    SaveCheckpoint(*options.checkpoint_dir / CheckpointFileName(config.trial_id),
                   *out.model, info);
  }
  return out;
}

TrialRunner MakeTorchTrialRunner(std::shared_ptr<const TrialData> data,
                                 TorchRunnerOptions options) {
  return [data = std::move(data), options = std::move(options)](const TrialConfig& config) {
    return TrainTrial(config, *data, options).report;
  };
}

}  // namespace weldx::search
